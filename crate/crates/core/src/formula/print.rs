use core::fmt;

use super::Formula;

const OR: u8 = 1;
const AND: u8 = 2;
const UNARY: u8 = 3;

impl fmt::Display for Formula {
    /// Canonical source form with minimal parentheses. Empty junctions print
    /// as their constants and single-member junctions as the member.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prec(self, OR, f)
    }
}

fn write_prec(formula: &Formula, ctx: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match formula {
        Formula::True => f.write_str("TRUE"),
        Formula::False => f.write_str("FALSE"),
        Formula::Var(v) => write!(f, "{v}"),
        Formula::Not(g) => {
            f.write_str("!")?;
            write_prec(g, UNARY, f)
        }
        Formula::And(cs) => write_junction(cs, AND, " & ", "TRUE", ctx, f),
        Formula::Or(cs) => write_junction(cs, OR, " | ", "FALSE", ctx, f),
    }
}

fn write_junction(
    children: &[Formula],
    prec: u8,
    sep: &str,
    empty: &str,
    ctx: u8,
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    match children {
        [] => f.write_str(empty),
        [only] => write_prec(only, ctx, f),
        _ => {
            let parens = ctx > prec;
            if parens {
                f.write_str("(")?;
            }
            for (i, c) in children.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write_prec(c, prec + 1, f)?;
            }
            if parens {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}
