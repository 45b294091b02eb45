//! CPLEX-style LP text: decimals in the body, exact fractions in `\` comments.

use std::fmt::Write;

use num_traits::{Signed, Zero};

use super::{Bound, LinearForm, LinearProgram, Relation};
use crate::rational::{to_decimal, to_ratio_string, Rational};

fn write_form(out: &mut String, lp: &LinearProgram, form: &LinearForm) {
    if form.is_empty() {
        out.push_str(" 0");
        return;
    }
    for (k, (var, coef)) in form.terms().iter().enumerate() {
        let sign = if coef.is_negative() { "-" } else if k == 0 { "" } else { "+" };
        let _ = write!(out, " {sign} {} {}", to_decimal(&coef.abs()), lp.name(*var));
    }
}

fn exact_comment(out: &mut String, lp: &LinearProgram, form: &LinearForm, tail: &str) {
    out.push_str("\\ exact:");
    for (var, coef) in form.terms() {
        let _ = write!(out, " {} {}", to_ratio_string(coef), lp.name(*var));
    }
    out.push_str(tail);
    out.push('\n');
}

pub(super) fn write_lp_format(lp: &LinearProgram) -> String {
    let mut out = String::new();
    out.push_str("Maximize\n");
    exact_comment(&mut out, lp, lp.objective(), "");
    out.push_str(" revenue:");
    write_form(&mut out, lp, lp.objective());
    out.push_str("\nSubject To\n");
    for row in lp.constraints() {
        let relation = match row.relation {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        };
        let rhs: &Rational = &row.rhs;
        exact_comment(&mut out, lp, &row.form, &format!(" {relation} {}", to_ratio_string(rhs)));
        let _ = write!(out, " {}:", row.name);
        write_form(&mut out, lp, &row.form);
        let _ = writeln!(out, " {relation} {}", if rhs.is_zero() { "0".to_string() } else { to_decimal(rhs) });
    }
    let free: Vec<&str> = (0..lp.num_variables()).filter(|&v| lp.bound(v) == Bound::Free).map(|v| lp.name(v)).collect();
    if !free.is_empty() {
        out.push_str("Bounds\n");
        for name in free {
            let _ = writeln!(out, " {name} free");
        }
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use crate::lp::{Bound, LinearForm, LinearProgram, Relation};
    use crate::rational::{int, rat};

    #[test]
    fn renders_fractions_and_decimals() {
        let mut lp = LinearProgram::new();
        let x = lp.add_variable("x", Bound::NonNegative);
        let y = lp.add_variable("y", Bound::Free);
        lp.set_objective(LinearForm::from_terms([(x, rat(1, 3)), (y, int(-1))]));
        lp.add_constraint("c1", LinearForm::from_terms([(x, int(1)), (y, int(1))]), Relation::Le, rat(3, 7));
        let text = lp.to_lp_format();
        let expected = "Maximize\n\\ exact: 1/3 x -1/1 y\n revenue:  0.333333333333 x - 1 y\nSubject To\n\
                        \\ exact: 1/1 x 1/1 y <= 3/7\n c1:  1 x + 1 y <= 0.428571428571\nBounds\n y free\nEnd\n";
        assert_eq!(text, expected);
    }
}
