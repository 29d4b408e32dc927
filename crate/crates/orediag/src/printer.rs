//! Canonical text forms. Polynomial output round-trips through the parser.

use crate::basepoly::BasePoly;
use crate::matrix::{FracEntry, OreMatrix, RatioMatrix};
use crate::order::TermOrder;
use crate::orepoly::OrePoly;
use crate::rational::{RatFunc, RatMatrix, RatOrePoly};
use crate::scalar::Scalar;

fn term_pieces(
    names: &[String],
    oper: Option<&str>,
    exps: &[u32],
    dpow: u32,
    coeff: &Scalar,
) -> (bool, String) {
    let mut pieces: Vec<String> = Vec::new();
    for (i, &e) in exps.iter().enumerate() {
        match e {
            0 => {}
            1 => pieces.push(names[i].clone()),
            _ => pieces.push(format!("{}^{}", names[i], e)),
        }
    }
    if let Some(op) = oper {
        match dpow {
            0 => {}
            1 => pieces.push(op.to_string()),
            _ => pieces.push(format!("{}^{}", op, dpow)),
        }
    }
    let negative = coeff.is_negative();
    let mag = if negative { coeff.neg() } else { coeff.clone() };
    let body = if pieces.is_empty() {
        mag.to_string()
    } else if mag.is_one() {
        pieces.join("*")
    } else {
        format!("{}*{}", mag, pieces.join("*"))
    };
    (negative, body)
}

fn join_terms(terms: Vec<(bool, String)>) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (neg, body)) in terms.into_iter().enumerate() {
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        out.push_str(&body);
    }
    out
}

pub fn ore_poly_string(f: &OrePoly) -> String {
    let order = TermOrder::default();
    let names = f.alg.var_names();
    let oper = f.alg.oper_name();
    let mut keys: Vec<_> = f.terms.keys().cloned().collect();
    keys.sort_by(|a, b| order.cmp_key(b, a));
    join_terms(
        keys.iter()
            .map(|k| term_pieces(names, Some(oper), &k.0, k.1, &f.terms[k]))
            .collect(),
    )
}

pub fn base_poly_string(p: &BasePoly, names: &[String]) -> String {
    let mut keys: Vec<_> = p.terms.keys().cloned().collect();
    keys.sort_by(|a, b| crate::basepoly::grevlex(b, a));
    join_terms(
        keys.iter()
            .map(|k| term_pieces(names, None, k, 0, &p.terms[k]))
            .collect(),
    )
}

pub fn frac_entry_string(e: &FracEntry) -> String {
    let e = e.normalized();
    if e.is_poly() {
        ore_poly_string(&e.num)
    } else {
        format!(
            "1/({})*({})",
            base_poly_string(&e.den, e.num.alg.var_names()),
            ore_poly_string(&e.num)
        )
    }
}

pub fn ore_matrix_string(m: &OreMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let cells: Vec<String> = (0..m.cols()).map(|j| ore_poly_string(m.at(i, j))).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

pub fn ratio_matrix_string(m: &RatioMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let cells: Vec<String> =
                (0..m.cols()).map(|j| frac_entry_string(m.at(i, j))).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

pub fn rat_func_string(r: &RatFunc, names: &[String]) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let num = base_poly_string(&r.num, names);
    if r.den.as_scalar().map(|c| c.is_one()).unwrap_or(false) {
        num
    } else {
        format!("({})/({})", num, base_poly_string(&r.den, names))
    }
}

pub fn rat_ore_string(f: &RatOrePoly) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let names = f.alg.var_names();
    let oper = f.alg.oper_name();
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in f.coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let cs = rat_func_string(c, names);
        let piece = if i == 0 {
            cs
        } else {
            let dp = if i == 1 { oper.to_string() } else { format!("{}^{}", oper, i) };
            if c.is_one() {
                dp
            } else {
                let inner_minus = cs.len() > 1 && cs[1..].contains('-');
                if cs.contains('+') || cs.contains('/') || inner_minus {
                    format!("({})*{}", cs, dp)
                } else {
                    format!("{}*{}", cs, dp)
                }
            }
        };
        parts.push(piece);
    }
    parts.join(" + ").replace("+ -", "- ")
}

pub fn rat_matrix_string(m: &RatMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let cells: Vec<String> = (0..m.cols()).map(|j| rat_ore_string(m.at(i, j))).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}
