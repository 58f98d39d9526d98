//! Aligned plain-text rendering of the simulation tables, mirroring the
//! row and column layout of the study they reproduce.

use surmax::{McCell, McReport};

fn method_label(method: &str) -> &'static str {
    match method {
        "maxscore" => "(0) Maximum Score",
        "logistic" => "(1) Surrogate Logistic",
        "huber" => "(2) Surrogate Huber",
        "probit" => "(3) Surrogate Probit",
        _ => "(?) Unknown",
    }
}

fn design_label(design: &str) -> &'static str {
    match design {
        "normal" => "(i) Normal",
        "t5" => "(ii) t5",
        "laplace" => "(iii) Laplace",
        _ => "(?)",
    }
}

fn find<'a>(report: &'a McReport, design: &str, method: &str, n: usize) -> Option<&'a McCell> {
    report
        .cells
        .iter()
        .find(|c| c.design == design && c.method == method && c.n == n)
}

fn sizes(report: &McReport) -> (usize, usize) {
    let mut s = report.config.sample_sizes.clone();
    s.sort_unstable();
    (s[0], *s.last().unwrap())
}

pub fn render_table1(report: &McReport) -> String {
    let (n_small, n_large) = sizes(report);
    let mut out = String::new();
    out.push_str(&format!(
        "Table 1: Evidence of the Root-n Consistency (reps = {}, seed = {})\n\n",
        report.config.reps, report.config.master_seed
    ));
    out.push_str(&format!(
        "{:<14} {:<24} {:>10} {:>11} {:>8}\n",
        "X",
        "Estimation Method",
        format!("RMSE({n_small})"),
        format!("RMSE({n_large})"),
        "Ratio"
    ));
    out.push_str(&"-".repeat(72));
    out.push('\n');
    for design in &report.config.designs {
        let dname = design.name();
        let mut first = true;
        for method in &report.config.methods {
            let m = method.label();
            let small = find(report, dname, &m, n_small);
            let large = find(report, dname, &m, n_large);
            let ratio = report
                .ratios
                .iter()
                .find(|r| r.design == dname && r.method == m)
                .map(|r| r.ratio);
            out.push_str(&format!(
                "{:<14} {:<24} {:>10} {:>11} {:>8}\n",
                if first { design_label(dname) } else { "" },
                method_label(&m),
                small.map_or("-".into(), |c| format!("{:.3}", c.rmse)),
                large.map_or("-".into(), |c| format!("{:.3}", c.rmse)),
                ratio.map_or("-".into(), |r| format!("{r:.3}")),
            ));
            first = false;
        }
    }
    out
}

pub fn render_table2(report: &McReport) -> String {
    let (n_small, n_large) = sizes(report);
    let mut out = String::new();
    out.push_str(&format!(
        "Table 2: Evidence of the Validity of the Standard Inference Methods\n\
         (reps = {}, bootstrap draws = {}, level = {}, seed = {})\n\n",
        report.config.reps, report.config.boot_s, report.config.level, report.config.master_seed
    ));
    out.push_str(&format!(
        "{:<14} {:<24} {:>24} {:>24}\n",
        "", "", "(A) Analytic", "(B) Bootstrap"
    ));
    out.push_str(&format!(
        "{:<14} {:<24} {:>11} {:>12} {:>11} {:>12}\n",
        "X",
        "Estimation Method",
        format!("n={n_small}"),
        format!("n={n_large}"),
        format!("n={n_small}"),
        format!("n={n_large}")
    ));
    out.push_str(&"-".repeat(90));
    out.push('\n');
    for design in &report.config.designs {
        let dname = design.name();
        let mut first = true;
        for method in &report.config.methods {
            let m = method.label();
            let fmt = |n: usize, boot: bool| -> String {
                find(report, dname, &m, n)
                    .and_then(|c| {
                        if boot {
                            c.coverage_boot
                        } else {
                            c.coverage_analytic
                        }
                    })
                    .map_or("-".into(), |v| format!("{v:.3}"))
            };
            out.push_str(&format!(
                "{:<14} {:<24} {:>11} {:>12} {:>11} {:>12}\n",
                if first { design_label(dname) } else { "" },
                method_label(&m),
                fmt(n_small, false),
                fmt(n_large, false),
                fmt(n_small, true),
                fmt(n_large, true),
            ));
            first = false;
        }
    }
    out
}

pub fn cell_summary(report: &McReport) -> String {
    let mut out = String::new();
    for c in &report.cells {
        out.push_str(&format!(
            "{} {} n={}: rmse={:.4} mean={:.4} sd={:.4}",
            c.design, c.method, c.n, c.rmse, c.theta_mean, c.theta_sd
        ));
        if let (Some(a), Some(b)) = (c.coverage_analytic, c.coverage_boot) {
            out.push_str(&format!(" coverage_analytic={a:.4} coverage_boot={b:.4}"));
        }
        out.push('\n');
    }
    for r in &report.ratios {
        out.push_str(&format!(
            "{} {}: RMSE({})/RMSE({}) = {:.4}\n",
            r.design, r.method, r.n_large, r.n_small, r.ratio
        ));
    }
    out.pop();
    out
}
