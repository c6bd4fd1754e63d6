use std::fmt;

use super::enumerate_ss;
use crate::error::{internal, Error, Result};
use crate::ff::Poly;

/// S_p(x) = ∏ (x - j) over supersingular j, with its factorization over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SsPolynomial {
    pub p: u64,
    /// Coefficients in F_p, constant term first.
    pub coeffs: Vec<u64>,
    /// Roots in F_p, ascending.
    pub linear: Vec<u64>,
    /// (b, c) for irreducible factors x^2 + bx + c, ascending.
    pub quadratic: Vec<(u64, u64)>,
}

impl SsPolynomial {
    /// Monic factors as coefficient lists (constant first), linear first.
    pub fn factors(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let mut out: Vec<Vec<u64>> = self.linear.iter().map(|&r| vec![(p - r) % p, 1]).collect();
        out.extend(self.quadratic.iter().map(|&(b, c)| vec![c, b, 1]));
        out
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

impl fmt::Display for SsPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &r in &self.linear {
            if r == 0 {
                write!(f, "x")?;
            } else {
                write!(f, "(x-{r})")?;
            }
        }
        for &(b, c) in &self.quadratic {
            write!(f, "(x^2")?;
            match b {
                0 => {}
                1 => write!(f, "+x")?,
                _ => write!(f, "+{b}x")?,
            }
            if c != 0 {
                write!(f, "+{c}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// The supersingular polynomial and its factorization into linear and
/// quadratic factors over F_p.
pub fn ss_polynomial(p: u64) -> Result<SsPolynomial> {
    let js = enumerate_ss(p)?;
    let ctx = js[0].ctx().clone();
    let expanded = Poly::from_roots(&ctx, &js);
    let coeffs = expanded
        .coeffs()
        .iter()
        .map(|c| c.as_prime_field().ok_or_else(|| internal!("S_{p} has coefficient {c} outside F_{p}")))
        .collect::<Result<Vec<u64>>>()?;
    let mut linear = Vec::new();
    let mut quadratic = Vec::new();
    for j in &js {
        if let Some(r) = j.as_prime_field() {
            linear.push(r);
            continue;
        }
        let jb = j.frobenius();
        if jb < *j {
            continue;
        }
        let b = (-(j + &jb)).as_prime_field();
        let c = (j * &jb).as_prime_field();
        match (b, c) {
            (Some(b), Some(c)) => quadratic.push((b, c)),
            _ => return Err(internal!("conjugate pair of {j} gives a factor outside F_{p}")),
        }
    }
    linear.sort();
    quadratic.sort();
    Ok(SsPolynomial { p, coeffs, linear, quadratic })
}

/// Parses a product such as `x(x-1728)(x+3)(x^2 - 6x - 6)` into its factors
/// reduced mod p, each as a coefficient list (constant first), sorted by
/// degree and then coefficients.
pub fn parse_factored(p: u64, s: &str) -> Result<Vec<Vec<u64>>> {
    let err = |m: &str| Error::Parse(format!("{m} in {s:?}"));
    if p < 2 {
        return Err(err("modulus below 2"));
    }
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        match chars[i] {
            'x' => {
                out.push(vec![0, 1 % p]);
                i += 1;
            }
            '(' => {
                let close = chars[i..].iter().position(|&c| c == ')').ok_or_else(|| err("unclosed parenthesis"))? + i;
                let body: String = chars[i + 1..close].iter().collect();
                out.push(parse_poly(p, &body).map_err(|m| err(&m))?);
                i = close + 1;
            }
            c => return Err(err(&format!("unexpected character {c:?}"))),
        }
    }
    if out.is_empty() {
        return Err(err("no factors"));
    }
    out.sort_by(|a, b| (a.len(), a.iter().rev().collect::<Vec<_>>()).cmp(&(b.len(), b.iter().rev().collect::<Vec<_>>())));
    Ok(out)
}

fn parse_poly(p: u64, body: &str) -> std::result::Result<Vec<u64>, String> {
    if body.is_empty() {
        return Err("empty factor".into());
    }
    let mut coeffs: Vec<u64> = Vec::new();
    let mut rest = body;
    while !rest.is_empty() {
        let (neg, r) = match rest.as_bytes()[0] {
            b'+' => (false, &rest[1..]),
            b'-' => (true, &rest[1..]),
            _ if coeffs.is_empty() && rest.len() == body.len() => (false, rest),
            _ => return Err("expected + or -".into()),
        };
        let end = r.find(['+', '-']).unwrap_or(r.len());
        let term = &r[..end];
        rest = &r[end..];
        let (num, power) = match term.find('x') {
            None => (term, 0usize),
            Some(xi) => {
                let pow = match &term[xi + 1..] {
                    "" => 1,
                    e => e
                        .strip_prefix('^')
                        .and_then(|d| d.parse::<usize>().ok())
                        .filter(|&d| d <= 64)
                        .ok_or_else(|| format!("bad exponent in {term:?}"))?,
                };
                (&term[..xi], pow)
            }
        };
        let mag = if num.is_empty() {
            1 % p
        } else {
            let digits = num.trim_end_matches('*');
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.len() > 30 {
                return Err(format!("bad coefficient {num:?}"));
            }
            (digits.parse::<u128>().map_err(|e| e.to_string())? % p as u128) as u64
        };
        let v = if neg { (p - mag) % p } else { mag };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, 0);
        }
        coeffs[power] = (coeffs[power] + v) % p;
    }
    while coeffs.len() > 1 && *coeffs.last().expect("nonempty") == 0 {
        coeffs.pop();
    }
    Ok(coeffs)
}
