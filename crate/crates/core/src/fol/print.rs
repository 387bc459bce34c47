use super::Formula;

/// Canonical surface form. Binary connectives are always parenthesized,
/// quantifiers in operand position are wrapped so the output reparses.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::ForAll(v, body) => {
            out.push_str("forall ");
            out.push_str(v);
            out.push_str(". ");
            write_formula(body, out);
        }
        Formula::Exists(v, body) => {
            out.push_str("exists ");
            out.push_str(v);
            out.push_str(". ");
            write_formula(body, out);
        }
        _ => write_unary(f, out),
    }
}

fn write_unary(f: &Formula, out: &mut String) {
    match f {
        Formula::Atom(a) => out.push_str(&a.to_string()),
        Formula::Not(inner) => {
            out.push('~');
            write_unary(inner, out);
        }
        Formula::And(a, b) => write_binary(a, "&", b, out),
        Formula::Or(a, b) => write_binary(a, "|", b, out),
        Formula::Implies(a, b) => write_binary(a, "->", b, out),
        Formula::Iff(a, b) => write_binary(a, "<->", b, out),
        Formula::ForAll(..) | Formula::Exists(..) => {
            out.push('(');
            write_formula(f, out);
            out.push(')');
        }
    }
}

fn write_binary(a: &Formula, op: &str, b: &Formula, out: &mut String) {
    out.push('(');
    write_unary(a, out);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    write_unary(b, out);
    out.push(')');
}
