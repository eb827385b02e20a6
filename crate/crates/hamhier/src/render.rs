//! Text and LaTeX rendering of polynomials, functionals and operators.

use hamhier_core::diffpoly::{render_latex, render_text, VarNames};
use hamhier_core::hamops::HamiltonianOperator;
use hamhier_core::{DiffPoly, LocalFunctional};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Latex,
    Json,
}

pub fn poly(p: &DiffPoly, names: &VarNames, latex: bool) -> String {
    if latex {
        render_latex(p, names)
    } else {
        render_text(p, names)
    }
}

/// Renders the canonical density of `h` under an integral sign.
pub fn functional(h: &LocalFunctional, names: &VarNames, latex: bool) -> String {
    let body = poly(&h.canonical(), names, latex);
    if latex {
        format!("\\int \\left({}\\right) dx", body)
    } else {
        format!("∫ ({}) dx", body)
    }
}

fn is_compound(s: &str) -> bool {
    s.chars().skip(1).any(|c| c == '+' || c == '-' || c == ' ')
}

/// One line per nonzero entry: `K[a,b] = Σ c_k dx^k`.
pub fn operator(k: &HamiltonianOperator, names: &VarNames, latex: bool) -> String {
    let n = k.n_fields();
    let mut lines = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let op = k.get(a, b);
            if op.is_zero() {
                continue;
            }
            let mut parts = Vec::new();
            for (p, c) in op.coeffs().collect::<Vec<_>>().into_iter().rev() {
                let body = poly(c, names, latex);
                let body = if p > 0 && is_compound(&body) {
                    if latex {
                        format!("\\left({}\\right)", body)
                    } else {
                        format!("({})", body)
                    }
                } else {
                    body
                };
                let d = match (p, latex) {
                    (0, _) => String::new(),
                    (1, false) => "dx".into(),
                    (_, false) => format!("dx^{}", p),
                    (1, true) => "\\partial_x".into(),
                    (_, true) => format!("\\partial_x^{{{}}}", p),
                };
                parts.push(match (d.is_empty(), body.as_str()) {
                    (true, _) => body,
                    (false, "1") => d,
                    (false, "-1") => format!("-{}", d),
                    (false, _) if latex => format!("{} {}", body, d),
                    (false, _) => format!("{}*{}", body, d),
                });
            }
            let rhs = parts.join(" + ").replace("+ -", "- ");
            lines.push(if latex {
                format!("K^{{{}{}}} = {}", a + 1, b + 1, rhs)
            } else {
                format!("K[{},{}] = {}", a + 1, b + 1, rhs)
            });
        }
    }
    if lines.is_empty() {
        lines.push("K = 0".into());
    }
    lines.join("\n")
}
