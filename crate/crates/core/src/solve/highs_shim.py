"""Runs HiGHS through highspy and writes a raw HiGHS solution file.

usage: highs_shim.py MODEL SOLUTION TIME_LIMIT THREADS ABS_GAP REL_GAP
"""
import sys

import highspy


def main():
    model, solution, time_limit, threads, abs_gap, rel_gap = sys.argv[1:7]
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("time_limit", float(time_limit))
    h.setOptionValue("threads", int(threads))
    h.setOptionValue("mip_abs_gap", float(abs_gap))
    h.setOptionValue("mip_rel_gap", float(rel_gap))
    h.readModel(model)
    h.run()
    h.writeSolution(solution, 0)
    info = h.getInfo()
    print("Model status :", h.modelStatusToString(h.getModelStatus()))
    if info.mip_node_count >= 0:
        print("Nodes", info.mip_node_count)
        print("Dual bound", info.mip_dual_bound)


if __name__ == "__main__":
    main()
