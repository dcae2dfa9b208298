use std::fmt::Write;

use genwitness::criteria::CoverageAnalysis;

/// Up to ten decimals with trailing zeros dropped, so round-off such as
/// `0.9999999999999998` reads as `1`.
fn num(x: f64) -> String {
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Human-readable coverage report for `check-pairs`.
pub fn coverage_table(cov: &CoverageAnalysis) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "n={} pairs={} L={}", cov.n, cov.pairs.len(), cov.bipartitions.len());
    for p in &cov.pairs {
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "pair '{}': delta={}{}",
            p.label,
            num(p.delta),
            if p.commuting { "" } else { "  (NOT COMMUTING)" }
        );
        let covered: Vec<String> = cov
            .bipartitions
            .iter()
            .enumerate()
            .filter(|&(i, _)| p.covered[i])
            .map(|(i, b)| {
                let mark = if p.conjugate[i] { "*" } else { "" };
                format!("{b}:{}{mark}", num(p.gammas[i]))
            })
            .collect();
        let _ = writeln!(s, "  covers {{{}}}", covered.join(", "));
        match p.gamma_min {
            Some(g) => {
                let _ = writeln!(s, "  gamma_min={}", num(g));
            }
            None => {
                let _ = writeln!(s, "  gamma_min=none");
            }
        }
        let _ = writeln!(s, "  conjugate={}", p.is_conjugate());
        for b in &p.tiny {
            let _ = writeln!(s, "  warning: tiny gamma across {b}");
        }
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "coverage counts:");
    for (b, c) in cov.bipartitions.iter().zip(&cov.counts) {
        let _ = writeln!(s, "  {b}: {c}");
    }
    let _ = writeln!(s, "theta_floor={}", cov.theta_floor);
    match cov.gamma_tilde {
        Some(g) => {
            let _ = writeln!(s, "gamma_tilde_min={}", num(g));
        }
        None => {
            let _ = writeln!(s, "gamma_tilde_min=none");
        }
    }
    let missing = cov.missing();
    if missing.is_empty() {
        let _ = writeln!(s, "coverage: complete");
    } else {
        let _ = writeln!(s, "coverage: GAPS at {{{}}}", missing.join(", "));
    }
    s
}
