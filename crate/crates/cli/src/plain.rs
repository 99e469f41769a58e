//! `--plain` rendering: aligned `key  value` rows, one list item per row.

use std::fmt::Write;

use crate::run::{FjOut, Payload, ResultDocument};

struct Table {
    rows: Vec<(String, String)>,
}

impl Table {
    fn row(&mut self, key: &str, value: impl ToString) {
        self.rows.push((key.to_string(), value.to_string()));
    }

    fn list<T: ToString>(&mut self, key: &str, items: &[T]) {
        if items.is_empty() {
            self.row(key, "(none)");
        }
        for item in items {
            self.row(key, item.to_string());
        }
    }

    fn render(&self) -> String {
        let width = self.rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        out
    }
}

pub fn render(doc: &ResultDocument) -> String {
    let mut t = Table { rows: Vec::new() };
    let job = &doc.job;
    t.row("command", job.command);
    t.row("p", job.p);
    t.row("vars", job.vars.join(", "));
    t.row("order", job.order);
    let gens: Vec<&str> = job.gens.iter().map(|g| g.text.as_str()).collect();
    t.list("gens", &gens);
    for (key, value) in [
        ("e", job.e.map(|v| v.to_string())),
        ("n", job.n.map(|v| v.to_string())),
        ("k", job.k.map(|v| v.to_string())),
        ("lambda", job.lambda.clone()),
        ("e_max", job.e_max.map(|v| v.to_string())),
        ("E", job.precision.map(|v| v.to_string())),
        ("depth", job.depth.map(|v| v.to_string())),
        ("range_top", job.range_top.map(|v| v.to_string())),
    ] {
        if let Some(v) = value {
            t.row(key, v);
        }
    }
    if let Some(j) = &job.j {
        let j: Vec<&str> = j.iter().map(|g| g.text.as_str()).collect();
        t.list("J", &j);
    }
    match &doc.result {
        Payload::FrobRoot { ideal } => t.list("root", ideal),
        Payload::Nu { level, window, members } => {
            t.row("level", level);
            t.row("window", format!("[0, {window})"));
            t.row(
                "members",
                members.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" "),
            );
        }
        Payload::NuJ { level, nu_j, threshold } => {
            t.row("level", level);
            t.row("nu_J", nu_j);
            t.row("threshold", threshold);
        }
        Payload::TestIdeal { lambda, e0, ideal } => {
            t.row("lambda", lambda);
            t.row("e0", e0);
            t.list("tau", ideal);
        }
        Payload::ApproxPoly { level, roots } => {
            t.row("level", level);
            t.list("root", roots);
        }
        Payload::Fjn { e0, entries } => {
            t.row("e0", e0);
            let lines: Vec<String> = entries
                .iter()
                .map(|x| match x {
                    FjOut::Exact { value } => format!("exact {value}"),
                    FjOut::Interval { lo, hi, candidate } => match candidate {
                        Some(c) => format!("({lo}, {hi}] candidate {c}"),
                        None => format!("({lo}, {hi}]"),
                    },
                })
                .collect();
            t.list("jump", &lines);
        }
        Payload::FjnInterval { e0, interval, jump } => {
            t.row("e0", e0);
            t.row("interval", interval);
            t.row("jump", jump);
        }
        Payload::StableExp { e0, witnesses } => {
            t.row("e0", e0);
            for (n, w) in witnesses.iter().enumerate() {
                t.row(&format!("tau(a^{n})"), w.join(", "));
            }
        }
        Payload::BsRoots {
            checked_level,
            roots,
            unresolved,
        } => {
            t.row("checked_level", checked_level);
            let lines: Vec<String> = roots.iter().map(|r| format!("{}  [{}]", r.value, r.digits)).collect();
            t.list("root", &lines);
            t.list("unresolved", unresolved);
        }
        Payload::Verify {
            agrees,
            bs_roots,
            fj_values,
        } => {
            t.row(
                "agrees",
                match agrees {
                    Some(b) => b.to_string(),
                    None => "undecided".to_string(),
                },
            );
            t.list("bs_root", bs_roots);
            t.list("fj_value", fj_values);
        }
        Payload::Partial {
            status,
            truncation_sets,
        } => {
            t.row("status", status);
            for s in truncation_sets {
                let v: Vec<String> = s.valid.iter().map(|x| x.to_string()).collect();
                t.row(&format!("level {}", s.level), v.join(" "));
            }
        }
    }
    for w in &doc.warnings {
        t.row("warning", w);
    }
    if let Some(ms) = doc.timing_ms {
        t.row("time_ms", ms);
    }
    t.row("version", format!("{} {}", doc.tool, doc.version));
    t.render()
}
