use std::fmt::Write;

use super::{LinearProgram, Sense};

fn term(out: &mut String, first: bool, coef: i64, name: &str) {
    let sign = if coef < 0 { "-" } else if first { "" } else { "+" };
    let abs = coef.unsigned_abs();
    if !sign.is_empty() {
        out.push_str(sign);
        out.push(' ');
    }
    if abs != 1 {
        let _ = write!(out, "{abs} ");
    }
    out.push_str(name);
    out.push(' ');
}

fn expression(coeffs: impl Iterator<Item = (i64, String)>) -> String {
    let mut s = String::new();
    let mut first = true;
    for (c, name) in coeffs {
        if c == 0 {
            continue;
        }
        term(&mut s, first, c, &name);
        first = false;
    }
    if first {
        s.push_str("0 ");
    }
    s.trim_end().to_string()
}

/// Writes the program in CPLEX LP text format.
pub fn write_lp_format(lp: &LinearProgram) -> String {
    let name = |j: usize| -> String {
        lp.names
            .get(j)
            .filter(|s| !s.is_empty())
            .cloned()
            .unwrap_or_else(|| format!("v{j}"))
    };
    let mut out = String::from("Minimize\n obj: ");
    out.push_str(&expression(lp.objective.iter().enumerate().map(|(j, &c)| (c, name(j)))));
    out.push_str("\nSubject To\n");
    for (i, r) in lp.rows.iter().enumerate() {
        let label = if r.name.is_empty() { format!("r{i}") } else { r.name.clone() };
        let op = match r.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        let _ = writeln!(out, " {label}: {} {op} {}", expression(r.coeffs.iter().map(|&(j, a)| (a, name(j)))), r.rhs);
    }
    out.push_str("Bounds\n");
    for j in 0..lp.var_count() {
        let n = name(j);
        match (lp.lower[j], lp.upper[j]) {
            (None, None) => {
                let _ = writeln!(out, " {n} free");
            }
            (Some(l), Some(u)) => {
                let _ = writeln!(out, " {l} <= {n} <= {u}");
            }
            (Some(l), None) => {
                let _ = writeln!(out, " {n} >= {l}");
            }
            (None, Some(u)) => {
                let _ = writeln!(out, " -inf <= {n} <= {u}");
            }
        }
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_sections() {
        let mut lp = LinearProgram::default();
        let x = lp.add_var("x", 3, Some(0), Some(1));
        let y = lp.add_var("y", -1, None, None);
        lp.add_row("c1", vec![(x, 1), (y, -2)], Sense::Ge, 1);
        let text = write_lp_format(&lp);
        assert_eq!(
            text,
            "Minimize\n obj: 3 x - y\nSubject To\n c1: x - 2 y >= 1\nBounds\n 0 <= x <= 1\n y free\nEnd\n"
        );
    }
}
