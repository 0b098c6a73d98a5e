mod common;

use arcflow::decode::{decompose_flow, to_bins, validate_solution};
use arcflow::flowgraph::{build_step3, compress_final};
use arcflow::instance::VbpInstance;
use arcflow::model::{build_arcflow_model, build_assignment_model, SolveStatus};
use arcflow::reduce::{coloring_to_vbp, queen_graph, ColoringMode, ReductionMap};
use arcflow::solve::{
    column_generation_lp, oracle_exact, solve_lp_relaxation, solve_milp, ColGenConfig, OracleOptions,
    SolutionFormat, SolverConfig, HIGHSPY_TEMPLATE,
};

fn example1() -> VbpInstance {
    VbpInstance::one_dimensional(7, &[(5, 3), (3, 1), (2, 2)]).unwrap()
}

#[test]
fn example1_end_to_end() {
    let Some(cfg) = common::solver() else { return };
    let inst = example1();
    let g = compress_final(&build_step3(&inst).unwrap());
    let model = build_arcflow_model(&g, &inst);
    let sol = solve_milp(&model, &cfg).unwrap();
    assert_eq!(sol.status, SolveStatus::Optimal);
    assert_eq!(sol.objective, Some(4));
    let flow = sol.flow_solution(&model, g.arc_count()).unwrap();
    assert_eq!(flow.z, 4);
    let packing = to_bins(&decompose_flow(&g, &flow).unwrap(), &inst).unwrap();
    assert_eq!(packing.objective, 4);
    assert!(validate_solution(&inst, &packing, &ReductionMap::plain(&inst)).passed());

    let lp = solve_lp_relaxation(&model, &cfg).unwrap();
    assert_eq!(lp.status, SolveStatus::Optimal);
    assert!((lp.objective - 4.0).abs() < 1e-6);
}

#[test]
fn assignment_model_matches_arcflow() {
    let Some(cfg) = common::solver() else { return };
    let inst = example1();
    let sol = solve_milp(&build_assignment_model(&inst, None), &cfg).unwrap();
    assert_eq!(sol.objective, Some(4));
    let too_few = solve_milp(&build_assignment_model(&inst, Some(1)), &cfg).unwrap();
    assert_eq!(too_few.status, SolveStatus::Infeasible);
    assert!(too_few.values.is_none());
}

#[test]
fn single_pattern_lp_equals_demand() {
    let Some(cfg) = common::solver() else { return };
    let inst = VbpInstance::one_dimensional(10, &[(10, 7)]).unwrap();
    let g = compress_final(&build_step3(&inst).unwrap());
    let lp = solve_lp_relaxation(&build_arcflow_model(&g, &inst), &cfg).unwrap();
    assert!((lp.objective - 7.0).abs() < 1e-6);
}

#[test]
fn lp_duals_price_out_the_relaxation() {
    let Some(cfg) = common::solver() else { return };
    let inst = VbpInstance::one_dimensional(9, &[(4, 1), (5, 1), (3, 1)]).unwrap();
    let g = compress_final(&build_step3(&inst).unwrap());
    let model = build_arcflow_model(&g, &inst);
    let lp = solve_lp_relaxation(&model, &cfg).unwrap();
    assert!((lp.objective - 1.5).abs() < 1e-6);
    let cg = column_generation_lp::<f64>(&inst, &g, &ColGenConfig::default()).unwrap();
    assert!((cg.z_lp - lp.objective).abs() < 1e-6);
}

#[test]
fn queen5_5_degree_model() {
    let Some(cfg) = common::solver() else { return };
    let (inst, map) = coloring_to_vbp(&queen_graph(5), ColoringMode::Degree).unwrap();
    let g = compress_final(&build_step3(&inst).unwrap());
    let model = build_arcflow_model(&g, &inst);
    let lp = solve_lp_relaxation(&model, &cfg).unwrap();
    assert!((lp.objective - 5.0).abs() < 0.01);
    let cg = column_generation_lp::<f64>(&inst, &g, &ColGenConfig::default()).unwrap();
    assert!((cg.z_lp - 5.0).abs() < 1e-6);
    let sol = solve_milp(&model, &cfg).unwrap();
    assert_eq!(sol.objective, Some(5));
    let flow = sol.flow_solution(&model, g.arc_count()).unwrap();
    let packing = to_bins(&decompose_flow(&g, &flow).unwrap(), &inst).unwrap();
    assert!(validate_solution(&inst, &packing, &map).passed());
}

#[test]
fn tiny_time_limit_reports_timeout() {
    let Some(cfg) = common::solver() else { return };
    let (inst, _) = coloring_to_vbp(&queen_graph(8), ColoringMode::Degree).unwrap();
    let g = compress_final(&build_step3(&inst).unwrap());
    let sol = solve_milp(&build_arcflow_model(&g, &inst), &cfg.with_time_limit(0.001)).unwrap();
    assert!(matches!(sol.status, SolveStatus::Timeout | SolveStatus::Feasible), "{:?}", sol.status);
    if let Some(b) = sol.bound {
        assert!(b <= 9.0 + 1e-6);
    }
}

#[test]
fn highspy_shim_agrees() {
    let cfg = SolverConfig::new(HIGHSPY_TEMPLATE, SolutionFormat::Highs).with_time_limit(60.0);
    let inst = example1();
    let g = compress_final(&build_step3(&inst).unwrap());
    let model = build_arcflow_model(&g, &inst);
    let sol = match solve_milp(&model, &cfg) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("skipping: {e}");
            return;
        }
    };
    assert_eq!(sol.objective, Some(4));
    let lp = solve_lp_relaxation(&model, &cfg).unwrap();
    assert!((lp.objective - 4.0).abs() < 1e-6);
    let y = lp.demand_duals(&model, 3);
    // Dual feasibility for the single-item patterns.
    assert!(y.iter().all(|&v| v <= 1.0 + 1e-6));
}

#[test]
fn random_instances_match_the_oracle() {
    let Some(cfg) = common::solver() else { return };
    for seed in 0..40 {
        let inst = common::random_small(seed);
        let g = compress_final(&build_step3(&inst).unwrap());
        let model = build_arcflow_model(&g, &inst);
        let sol = solve_milp(&model, &cfg).unwrap();
        let oracle = oracle_exact(&inst, &OracleOptions::default()).unwrap();
        assert_eq!(sol.objective, Some(oracle.bins as i64), "seed {seed}");
        let flow = sol.flow_solution(&model, g.arc_count()).unwrap();
        let packing = to_bins(&decompose_flow(&g, &flow).unwrap(), &inst).unwrap();
        assert_eq!(packing.objective, oracle.bins, "seed {seed}");
        assert!(validate_solution(&inst, &packing, &ReductionMap::plain(&inst)).passed());
    }
}
