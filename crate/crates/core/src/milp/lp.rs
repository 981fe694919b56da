//! LP-format text output.

use std::fmt::Write;

use super::{MilpModel, Sense, VarKind};

const TERMS_PER_LINE: usize = 8;

/// Shortest decimal text that reads back as the same `f64`.
fn number(x: f64) -> String {
    let s = format!("{x}");
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn linear(out: &mut String, model: &MilpModel, terms: &[(usize, f64)]) {
    for (k, &(v, c)) in terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let name = &model.vars[v].name;
        match (k, c < 0.0) {
            (0, false) => write!(out, " {} {name}", number(c)),
            (0, true) => write!(out, " -{} {name}", number(-c)),
            (_, false) => write!(out, " + {} {name}", number(c)),
            (_, true) => write!(out, " - {} {name}", number(-c)),
        }
        .expect("writing to a String");
    }
}

/// Serializes the model. Output depends only on the model, so the same
/// mission and horizon always give byte-identical text.
pub fn export_lp(model: &MilpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "\\ reconnaissance model: {} variables, {} constraints, horizon {}, M = {}",
        model.vars.len(),
        model.constraints.len(),
        model.horizon,
        number(model.big_m)
    );
    out.push_str("Maximize\n obj:");
    linear(&mut out, model, &model.objective);
    out.push_str("\nSubject To\n");
    for c in &model.constraints {
        let _ = write!(out, " {}:", c.name);
        linear(&mut out, model, &c.terms);
        let op = match c.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        let _ = writeln!(out, " {op} {}", number(c.rhs));
    }
    out.push_str("Bounds\n");
    for v in model.vars.iter().filter(|v| v.kind == VarKind::Continuous) {
        let _ = writeln!(out, " {} <= {} <= {}", number(v.lower), v.name, number(v.upper));
    }
    out.push_str("Binary\n");
    for v in model.vars.iter().filter(|v| v.kind == VarKind::Binary) {
        let _ = writeln!(out, " {}", v.name);
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::milp::{build_milp, SendReset};

    #[test]
    fn numbers_round_trip() {
        for x in [0.9, 1.0, 0.1 + 0.2, 1e-20, 3.0, -0.5, 0.0] {
            assert_eq!(number(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(number(0.9), "0.9");
        assert_eq!(number(1.0), "1");
        assert_eq!(number(-0.0), "0");
    }

    #[test]
    fn fig1_text_shape() {
        let model = build_milp(&instances::fig1(), 7, SendReset::Corrected).unwrap();
        let text = export_lp(&model);
        assert!(text.contains("Maximize\n obj: 1 eps_0_1 + 0.9 eps_1_1 + 0.5 eps_2_1 + 0.1 eps_3_1"));
        assert!(text.contains(" move_onehot_t3: "));
        assert!(text.contains(" flow_j2_t5: "));
        assert!(text.contains(" alpha_ub1_i1_j2_t4: 1 alpha_1_2_4 - 1 sS_3 <= 0\n"));
        assert!(text.contains(" alpha_ub1_i1_j2_t1: 1 alpha_1_2_1 <= 1\n"));
        assert!(text.contains(" 0 <= gamma_2_3_4 <= 3\n"));
        assert!(text.ends_with("End\n"));
        assert_eq!(text, export_lp(&model));
    }

    #[test]
    fn horizon_one_objective() {
        let model = build_milp(&instances::fig1(), 1, SendReset::Corrected).unwrap();
        let text = export_lp(&model);
        let obj = text.lines().find(|l| l.starts_with(" obj:")).unwrap();
        assert_eq!(obj, " obj: 1 eps_0_1 + 0.9 eps_1_1 + 0.5 eps_2_1 + 0.1 eps_3_1");
    }
}
