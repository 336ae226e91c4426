//! Plain-text tables for the terminal.

use std::fmt::Write;

use ck_core::analysis::{AnalysisReport, CountSource};
use ck_core::criteria::Criterion;
use ck_core::hilbert::TruncatedSeries;
use ck_core::regression::RegressionRow;

pub fn series(s: &TruncatedSeries) -> String {
    let items: Vec<String> = s.coeffs().iter().map(|c| c.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn report(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let i = &r.invariants;
    let s: Vec<String> = r.s_primes.iter().map(|q| q.to_string()).collect();
    writeln!(
        out,
        "curve: {}  g={} n={} n1={} n2={} #|D|={} b={}",
        r.curve.family_name(),
        i.g,
        i.n,
        i.n1,
        i.n2,
        i.d_closed,
        i.b
    )
    .unwrap();
    writeln!(
        out,
        "S = {{{}}}  p = {}  variant = {}{}",
        s.join(", "),
        r.p,
        r.variant,
        if r.depth1 { "  (depth-1 bound)" } else { "" }
    )
    .unwrap();
    let a = &r.arithmetic;
    writeln!(
        out,
        "r={} r_p={} rho={} rho_f={} rho_geo={} h_BK={}",
        a.r, a.r_p, a.rho, a.rho_f, a.rho_geo, a.h_bk
    )
    .unwrap();
    let pc = &r.point_count;
    match (&pc.source, &pc.counts) {
        (CountSource::Computed, Some(c)) => writeln!(
            out,
            "#Y(F_{p}) = {}  #D(F_{p}) = {}  Hasse-Weil margin {:.3}",
            c.y_count,
            c.cusp_count,
            pc.hasse_weil_margin.unwrap_or(f64::NAN),
            p = r.p
        ),
        _ => writeln!(out, "#Y(F_{}) = {} (supplied)", r.p, pc.y_count),
    }
    .unwrap();

    let crit = r.headline_criteria();
    writeln!(
        out,
        "\n{:<14} {:>6}  {:<5}  flags",
        "criterion", "value", "holds"
    )
    .unwrap();
    for c in Criterion::ALL {
        let v = &crit.verdicts[&c];
        let flags: Vec<String> = v.flags.iter().map(|f| f.to_string()).collect();
        writeln!(
            out,
            "{:<14} {:>6}  {:<5}  {}",
            c.symbol(r.variant),
            v.value,
            yes_no(v.holds),
            flags.join(", ")
        )
        .unwrap();
    }

    if !r.quotients.is_empty() {
        writeln!(
            out,
            "\n{:<6} {:>10}  {:>12}  {:<18} HS_loc",
            "quot", "finiteness", "coleman(w2)", "HS_glob"
        )
        .unwrap();
        for (name, q) in &r.quotients {
            writeln!(
                out,
                "{:<6} {:>10}  {:>12}  {:<18} {}",
                name,
                q.finiteness.margin,
                q.coleman_weight2.margin,
                series(&q.hs_global),
                series(&q.hs_local)
            )
            .unwrap();
        }
    }

    for (mode, b) in &r.bounds {
        let why = match b.justified_by {
            Some(c) => format!("by {}", c.symbol(r.variant)),
            None => "NOT JUSTIFIED".into(),
        };
        writeln!(
            out,
            "\nbound ({}): types={} kappa={:.6} per-type={:.6} total={:.6} floor={}  [{}]",
            mode.name(),
            b.bound.reduction_types,
            b.bound.kappa,
            b.bound.per_type_bound,
            b.bound.total_bound,
            b.bound.total_bound_floor,
            why
        )
        .unwrap();
    }

    if !r.conditional_flags.is_empty() {
        let flags: Vec<String> = r.conditional_flags.iter().map(|f| f.to_string()).collect();
        writeln!(out, "\nconditional on: {}", flags.join(", ")).unwrap();
    }
    if !r.warnings.is_empty() {
        writeln!(out, "\nwarnings:").unwrap();
        for w in &r.warnings {
            writeln!(out, "  - {w}").unwrap();
        }
    }
    out
}

pub fn regressions(rows: &[RegressionRow]) -> String {
    let mut out = String::new();
    for r in rows {
        writeln!(
            out,
            "{}  {:<32} {}  expected {}  got {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.example,
            r.check,
            r.expected,
            r.actual
        )
        .unwrap();
    }
    let passed = rows.iter().filter(|r| r.passed).count();
    writeln!(out, "{passed}/{} regressions passed", rows.len()).unwrap();
    out
}
