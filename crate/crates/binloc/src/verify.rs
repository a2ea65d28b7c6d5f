//! The bound and identity checks behind `binloc verify`.

use binloc_core::fitness::{count_local_maxima, OneMaxTarget};
use binloc_core::locality::*;
use binloc_core::representation::*;
use binloc_core::Representation;
use num_rational::Ratio;

use crate::error::{CliError, CliResult};
use crate::reprfile::to_json;

pub const VERIFY_MAX_ELL: u32 = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// JSON of the offending representation, for reproduction.
    pub payload: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>, repr: Option<&Representation>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
            payload: (!passed).then(|| repr.map(to_json)).flatten(),
        }
    }

    pub fn line(&self) -> String {
        let mut s = format!("{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail);
        if let Some(p) = &self.payload {
            s.push_str("\n     repr ");
            s.push_str(p);
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub max_ell: u32,
    pub samples: u64,
    pub seed: u64,
    /// Also check the bounds on this representation.
    pub extra: Option<Representation>,
}

fn exact_general(r: &Representation) -> CliResult<Ratio<i128>> {
    let g = general_locality(r)?;
    Ok(Ratio::new(g.numerator as i128, g.pairs.max(1) as i128))
}

fn bound_checks(label: &str, r: &Representation, out: &mut Vec<Check>) -> CliResult<()> {
    let ell = r.ell();
    let p = point_locality(r).value();
    let (lo, hi) = (point_locality_lower_bound(ell), point_locality_upper_bound(ell));
    out.push(Check::new(
        format!("{label} ell={ell} point locality within bounds"),
        lo <= p && p <= hi,
        format!("{lo} <= {p} <= {hi}"),
        Some(r),
    ));
    let ell64 = ell as u64;
    let via_dm = Ratio::new(rothlauf_dm(r), ell64 << (ell64 - 1)) + 1;
    out.push(Check::new(
        format!("{label} ell={ell} dm identity"),
        via_dm == p,
        format!("dm/(ell 2^(ell-1)) + 1 = {via_dm}, p = {p}"),
        Some(r),
    ));
    if ell <= GENERAL_LOCALITY_MAX_ELL {
        let (g, bound) = (exact_general(r)?, general_locality_lower_bound_exact(ell)?);
        out.push(Check::new(
            format!("{label} ell={ell} general locality bound"),
            g >= bound,
            format!("{g} >= {bound}"),
            Some(r),
        ));
    }
    Ok(())
}

pub fn run_verify(opts: &VerifyOptions) -> CliResult<Vec<Check>> {
    if opts.max_ell == 0 || opts.max_ell > VERIFY_MAX_ELL {
        return Err(CliError::Usage(format!("--max-ell must lie in [1, {VERIFY_MAX_ELL}]")));
    }
    let mut out = Vec::new();

    for ell in 1..=opts.max_ell.min(3) {
        let rep = verify_bounds_exhaustive(ell)?;
        let min_r = Representation::from_perm(ell, rep.argmin.clone())?;
        let max_r = Representation::from_perm(ell, rep.argmax.clone())?;
        out.push(Check::new(
            format!("exhaustive ell={ell} minimum"),
            rep.min_matches_bound(),
            format!("min {} over {} permutations", rep.min, rep.permutations),
            Some(&min_r),
        ));
        out.push(Check::new(
            format!("exhaustive ell={ell} maximum"),
            rep.max_matches_bound(),
            format!("max {}", rep.max),
            Some(&max_r),
        ));
        out.push(Check::new(
            format!("exhaustive ell={ell} mean"),
            rep.mean_matches_expectation(),
            format!("mean {} vs {}", rep.mean, expected_point_locality(ell)?),
            None,
        ));
    }

    for ell in 1..=opts.max_ell {
        let lo = point_locality_lower_bound(ell);
        let hi = point_locality_upper_bound(ell);
        let mut labeled = vec![
            ("sb", make_sb(ell)?, Some(lo)),
            ("brg", make_brg(ell)?, Some(lo)),
            ("harper-min", make_harper_min(ell, opts.seed)?, Some(lo)),
            ("harper-max", make_harper_max(ell, opts.seed)?, Some(hi)),
            ("random", make_random(ell, opts.seed)?, None),
        ];
        if ell >= 3 {
            labeled.push(("suboptimal-gray", make_suboptimal_gray(ell, opts.seed)?, None));
        }
        for (label, r, attains) in &labeled {
            if let Some(target) = attains {
                let p = point_locality(r).value();
                out.push(Check::new(
                    format!("{label} ell={ell} attains bound"),
                    p == *target,
                    format!("p = {p}, bound {target}"),
                    Some(r),
                ));
            }
            bound_checks(label, r, &mut out)?;
        }
        let brg = &labeled[1].1;
        let g = exact_general(brg)?;
        let bound = general_locality_lower_bound_exact(ell)?;
        out.push(Check::new(
            format!("brg ell={ell} general locality equals bound"),
            g == bound,
            format!("{g} vs {bound}"),
            Some(brg),
        ));
        for (label, r, _) in labeled.iter().filter(|(l, _, _)| matches!(*l, "brg" | "suboptimal-gray")) {
            let gray = r.is_gray();
            let single = gray
                && (0..r.size() as u32).all(|a| {
                    OneMaxTarget::new(ell, a)
                        .and_then(|t| count_local_maxima(&t, r))
                        .is_ok_and(|m| m.count == 1)
                });
            out.push(Check::new(
                format!("{label} ell={ell} gray with a single local maximum for every target"),
                single,
                format!("is_gray = {gray}"),
                Some(r),
            ));
        }
    }

    for ell in 4..=opts.max_ell {
        let est = monte_carlo_expected_locality(ell, opts.samples, opts.seed)?;
        let e = expected_point_locality(ell)?;
        let target = *e.numer() as f64 / *e.denom() as f64;
        out.push(Check::new(
            format!("monte carlo ell={ell} mean within 3 standard errors"),
            est.covers(target, 3.0),
            format!(
                "mean {:.4} +/- {:.4} vs {target:.4} ({} samples)",
                est.mean,
                est.stderr.unwrap_or(0.0),
                est.samples
            ),
            None,
        ));
    }

    if let Some(r) = &opts.extra {
        bound_checks("input", r, &mut out)?;
    }
    Ok(out)
}
