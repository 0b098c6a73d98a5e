use std::fmt;

/// Absolute tolerance for comparing relaxation values with integers.
pub const LP_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GapClass {
    /// `z_ip = z_lp`.
    Ip,
    /// `z_ip = ⌈z_lp⌉`.
    Irup,
    /// `z_ip = ⌈z_lp⌉ + 1`.
    Mirup,
    NonMirup,
}

impl fmt::Display for GapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GapClass::Ip => "IP",
            GapClass::Irup => "IRUP",
            GapClass::Mirup => "MIRUP",
            GapClass::NonMirup => "NON-MIRUP",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundReport {
    pub z_lp: f64,
    pub z_ip: i64,
    /// `z_ip − z_lp`.
    pub gap: f64,
    pub ceil_lp: i64,
    pub class: GapClass,
}

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("integer optimum {z_ip} is below the relaxation value {z_lp}")]
pub struct BoundError {
    pub z_lp: f64,
    pub z_ip: i64,
}

/// `⌈z_lp⌉` with values within [`LP_TOLERANCE`] of an integer snapped onto it.
pub fn ceil_lp(z_lp: f64) -> i64 {
    let r = z_lp.round();
    if (z_lp - r).abs() <= LP_TOLERANCE {
        r as i64
    } else {
        z_lp.ceil() as i64
    }
}

/// Classifies the gap between a relaxation value and an integer optimum.
pub fn lp_bound_report(z_lp: f64, z_ip: i64) -> Result<BoundReport, BoundError> {
    if (z_ip as f64) < z_lp - LP_TOLERANCE {
        return Err(BoundError { z_lp, z_ip });
    }
    let ceil = ceil_lp(z_lp);
    let integral = (z_lp - z_lp.round()).abs() <= LP_TOLERANCE;
    let class = if integral && z_ip == ceil {
        GapClass::Ip
    } else if z_ip == ceil {
        GapClass::Irup
    } else if z_ip == ceil + 1 {
        GapClass::Mirup
    } else {
        GapClass::NonMirup
    };
    Ok(BoundReport { z_lp, z_ip, gap: z_ip as f64 - z_lp, ceil_lp: ceil, class })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes() {
        assert_eq!(lp_bound_report(5.0, 5).unwrap().class, GapClass::Ip);
        assert_eq!(lp_bound_report(8.44, 9).unwrap().class, GapClass::Irup);
        assert_eq!(lp_bound_report(3.0, 4).unwrap().class, GapClass::Mirup);
        assert_eq!(lp_bound_report(3.2, 6).unwrap().class, GapClass::NonMirup);
        assert_eq!(lp_bound_report(4.999_999_9, 5).unwrap().class, GapClass::Ip);
    }

    #[test]
    fn inconsistent_pair_is_an_error() {
        assert!(lp_bound_report(5.5, 5).is_err());
        assert!((lp_bound_report(22.0 / 7.0, 4).unwrap().gap - 6.0 / 7.0).abs() < 1e-12);
    }
}
