//! Text form of field elements: `a*u+b` for F_{p^2} (just `b` when a = 0),
//! generalized to `c*u^k+...+c*u+c` for higher degree.

use std::fmt;

use super::{Ctx, FieldElem};
use crate::error::{Error, Result};

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let top = self.c.iter().rposition(|&x| x != 0).unwrap_or(0);
        let mut first = true;
        for k in (0..=top).rev() {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", self.c[0])?,
                1 => write!(f, "{}*u", self.c[1])?,
                _ => write!(f, "{}*u^{}", self.c[k], k)?,
            }
        }
        Ok(())
    }
}

fn parse_coeff(s: &str, p: u64) -> Result<u64> {
    if s.is_empty() || s.len() > 20 || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad coefficient {s:?}")));
    }
    let v: u64 = s.parse().map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))?;
    if v >= p {
        return Err(Error::Parse(format!("coefficient {v} not reduced mod {p}")));
    }
    Ok(v)
}

impl FieldElem {
    /// Parses the text form produced by `Display`. Terms must appear with
    /// strictly decreasing powers of `u`; every coefficient lies in `[0, p)`.
    pub fn parse(ctx: &Ctx, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty field element".into()));
        }
        let mut c = ctx.zero_raw();
        let mut last: Option<usize> = None;
        for term in s.split('+') {
            let (coef, power) = match term.split_once('*') {
                None => (term, 0usize),
                Some((coef, var)) => {
                    let power = if var == "u" {
                        1
                    } else if let Some(e) = var.strip_prefix("u^") {
                        if e.is_empty() || e.len() > 3 || !e.bytes().all(|b| b.is_ascii_digit()) {
                            return Err(Error::Parse(format!("bad exponent in {term:?}")));
                        }
                        let e: usize = e.parse().map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?;
                        if e < 2 {
                            return Err(Error::Parse(format!("non-canonical exponent in {term:?}")));
                        }
                        e
                    } else {
                        return Err(Error::Parse(format!("bad term {term:?}")));
                    };
                    (coef, power)
                }
            };
            if power >= ctx.degree() {
                return Err(Error::Parse(format!("power u^{power} outside a degree-{} field", ctx.degree())));
            }
            if last.is_some_and(|l| power >= l) {
                return Err(Error::Parse(format!("terms out of order at {term:?}")));
            }
            last = Some(power);
            c[power] = parse_coeff(coef, ctx.characteristic())?;
        }
        Ok(FieldElem::from_raw(ctx, c))
    }
}
