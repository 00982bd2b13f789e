//! Laurent polynomials over the integers and Alexander polynomials by Fox
//! free differential calculus.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of `Z[t, t⁻¹]`: `Σ coeffs[k] t^{low + k}`, kept trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Laurent {
    low: i64,
    coeffs: Vec<i128>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { low: 0, coeffs: vec![] }
    }

    pub fn monomial(c: i128, power: i64) -> Self {
        Laurent { low: power, coeffs: vec![c] }.trimmed()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// From ascending coefficients starting at `t^low`.
    pub fn from_coeffs(low: i64, coeffs: Vec<i128>) -> Self {
        Laurent { low, coeffs }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|&&c| c == 0).count();
        self.coeffs.drain(..lead_zeros);
        self.low += lead_zeros as i64;
        if self.coeffs.is_empty() {
            self.low = 0;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let low = self.low.min(o.low);
        let high = self.high().max(o.high());
        let mut c = vec![0i128; (high - low + 1) as usize];
        for (k, &v) in self.coeffs.iter().enumerate() {
            c[(self.low - low) as usize + k] += v;
        }
        for (k, &v) in o.coeffs.iter().enumerate() {
            c[(o.low - low) as usize + k] += v;
        }
        Laurent::from_coeffs(low, c)
    }

    pub fn neg(&self) -> Laurent {
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &Laurent) -> Laurent {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        if self.is_zero() || o.is_zero() {
            return Laurent::zero();
        }
        let mut c = vec![0i128; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Laurent::from_coeffs(self.low + o.low, c)
    }

    /// Exact quotient `self / d`; fails if `d` does not divide `self` in `Z[t, t⁻¹]`.
    pub fn div_exact(&self, d: &Laurent) -> Option<Laurent> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Laurent::zero());
        }
        let mut rem = self.coeffs.clone();
        let dl = d.coeffs.len();
        if rem.len() < dl {
            return None;
        }
        let lead = *d.coeffs.last().unwrap();
        let mut q = vec![0i128; rem.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let top = rem[k + dl - 1];
            if top % lead != 0 {
                return None;
            }
            let f = top / lead;
            q[k] = f;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= f * dc;
            }
        }
        if rem.iter().any(|&r| r != 0) {
            return None;
        }
        Some(Laurent::from_coeffs(self.low - d.low, q))
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().enumerate().map(|(k, &c)| c as f64 * t.powi((self.low + k as i64) as i32)).sum()
    }

    /// Value at `t = 1`.
    pub fn at_one(&self) -> i128 {
        self.coeffs.iter().sum()
    }

    /// Representative of the class modulo units `±t^k`: lowest degree 0,
    /// positive leading coefficient.
    pub fn normalized(&self) -> Laurent {
        if self.is_zero() {
            return Laurent::zero();
        }
        let sign = if *self.coeffs.last().unwrap() < 0 { -1 } else { 1 };
        Laurent { low: 0, coeffs: self.coeffs.iter().map(|c| c * sign).collect() }
    }

    /// Coefficients read the same in both directions, i.e. `Δ(t) ≐ Δ(1/t)`.
    pub fn is_palindromic(&self) -> bool {
        let c = &self.coeffs;
        (0..c.len()).all(|k| c[k] == c[c.len() - 1 - k])
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[k];
            if c == 0 {
                continue;
            }
            let p = self.low + k as i64;
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { '-' } else { '+' })?;
            }
            first = false;
            let var = match p {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{p}"),
            };
            if var.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag}{var}")?;
            }
        }
        Ok(())
    }
}

/// A knot group presentation in which every generator abelianizes to `t`.
///
/// Relators are whitespace-separated words; a token equal to a generator
/// name is that generator, and the same name with its first letter
/// capitalized is its inverse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnotPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
}

type Word = Vec<(usize, i8)>;

impl KnotPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<String>) -> Result<Self> {
        let p = KnotPresentation { generators, relators };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        for g in &self.generators {
            if !g.chars().next().is_some_and(|c| c.is_lowercase()) {
                return Err(Error::Presentation(format!("generator `{g}` must start with a lowercase letter")));
            }
        }
        if self.generators.is_empty() {
            return Err(Error::Presentation("no generators".into()));
        }
        if self.relators.len() + 1 != self.generators.len() {
            return Err(Error::Presentation(format!(
                "deficiency-one presentation expected: {} generators, {} relators",
                self.generators.len(),
                self.relators.len()
            )));
        }
        for r in &self.relators {
            let w = self.parse(r)?;
            if w.iter().map(|&(_, e)| e as i64).sum::<i64>() != 0 {
                return Err(Error::Presentation(format!("relator `{r}` does not abelianize to 1")));
            }
        }
        Ok(())
    }

    fn parse(&self, word: &str) -> Result<Word> {
        word.split_whitespace()
            .map(|tok| {
                if let Some(i) = self.generators.iter().position(|g| g == tok) {
                    return Ok((i, 1));
                }
                let mut chars = tok.chars();
                let first = chars.next().unwrap();
                let lowered: String = first.to_lowercase().chain(chars).collect();
                if first.is_uppercase() {
                    if let Some(i) = self.generators.iter().position(|g| *g == lowered) {
                        return Ok((i, -1));
                    }
                }
                Err(Error::Presentation(format!("unknown letter `{tok}`")))
            })
            .collect()
    }

    /// Presentation of the closure of a braid on `strands` strands.
    ///
    /// The braid word lists generators `σ_k` as `k` (1-based) and their
    /// inverses as `-k`. Relators are `β(x_i) x_i⁻¹` for the Artin action,
    /// dropping the last one, which follows from the others.
    pub fn from_braid(strands: usize, braid: &[i32]) -> Result<Self> {
        if strands == 0 {
            return Err(Error::Presentation("braid needs at least one strand".into()));
        }
        let mut images: Vec<Word> = (0..strands).map(|i| vec![(i, 1)]).collect();
        for &s in braid {
            let k = s.unsigned_abs() as usize;
            if k == 0 || k >= strands {
                return Err(Error::Presentation(format!("braid letter {s} out of range")));
            }
            let (i, j) = (k - 1, k);
            // Substitute the generator action into the current images.
            let sub = |x: usize| -> Word {
                if s > 0 {
                    if x == i {
                        vec![(i, 1), (j, 1), (i, -1)]
                    } else if x == j {
                        vec![(i, 1)]
                    } else {
                        vec![(x, 1)]
                    }
                } else if x == i {
                    vec![(j, 1)]
                } else if x == j {
                    vec![(j, -1), (i, 1), (j, 1)]
                } else {
                    vec![(x, 1)]
                }
            };
            images = images
                .iter()
                .map(|w| {
                    let mut out: Word = Vec::new();
                    for &(g, e) in w {
                        let mut piece = sub(g);
                        if e < 0 {
                            piece.reverse();
                            for p in piece.iter_mut() {
                                p.1 = -p.1;
                            }
                        }
                        for letter in piece {
                            if out.last().is_some_and(|&(h, f)| h == letter.0 && f == -letter.1) {
                                out.pop();
                            } else {
                                out.push(letter);
                            }
                        }
                    }
                    out
                })
                .collect();
        }
        let names: Vec<String> = (0..strands).map(|i| format!("x{}", i + 1)).collect();
        let spell = |w: &Word| -> String {
            w.iter()
                .map(|&(g, e)| if e > 0 { names[g].clone() } else { format!("X{}", g + 1) })
                .collect::<Vec<_>>()
                .join(" ")
        };
        let relators = (0..strands - 1)
            .map(|i| {
                let mut w = images[i].clone();
                w.push((i, -1));
                spell(&w)
            })
            .collect();
        KnotPresentation::new(names, relators)
    }

    /// Abelianized Fox Jacobian: entry `(r, j)` is `∂ relator_r / ∂ x_j` at `x ↦ t`.
    pub fn fox_matrix(&self) -> Result<Vec<Vec<Laurent>>> {
        let g = self.generators.len();
        self.relators
            .iter()
            .map(|r| {
                let w = self.parse(r)?;
                let mut row = vec![Laurent::zero(); g];
                let mut prefix = 0i64;
                for (x, e) in w {
                    if e > 0 {
                        row[x] = row[x].add(&Laurent::monomial(1, prefix));
                        prefix += 1;
                    } else {
                        prefix -= 1;
                        row[x] = row[x].add(&Laurent::monomial(-1, prefix));
                    }
                }
                Ok(row)
            })
            .collect()
    }
}

/// Determinant over `Z[t, t⁻¹]` by fraction-free (Bareiss) elimination.
fn bareiss_det(mut a: Vec<Vec<Laurent>>) -> Laurent {
    let n = a.len();
    if n == 0 {
        return Laurent::one();
    }
    let mut sign = 1;
    let mut prev = Laurent::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Laurent::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div_exact(&prev).expect("Bareiss step is an exact division");
            }
            a[i][k] = Laurent::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        d.neg()
    } else {
        d
    }
}

/// Alexander polynomial of the knot, normalized to lowest degree 0 with a
/// positive leading coefficient.
pub fn fox_alexander(p: &KnotPresentation) -> Result<Laurent> {
    p.validate()?;
    let m = p.fox_matrix()?;
    let g = p.generators.len();
    let minor: Vec<Vec<Laurent>> = m.into_iter().map(|row| row[..g - 1].to_vec()).collect();
    Ok(bareiss_det(minor).normalized())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i128]) -> Laurent {
        Laurent::from_coeffs(0, c.to_vec())
    }

    #[test]
    fn display_forms() {
        assert_eq!(poly(&[1, -1, 1]).to_string(), "t^2 - t + 1");
        assert_eq!(poly(&[1, -3, 1]).to_string(), "t^2 - 3t + 1");
        assert_eq!(Laurent::one().to_string(), "1");
        assert_eq!(Laurent::monomial(-2, -1).to_string(), "-2t^-1");
    }

    #[test]
    fn exact_division_roundtrip() {
        let a = poly(&[1, -1, 1]);
        let b = Laurent::from_coeffs(-2, vec![3, 0, 1]);
        assert_eq!(a.mul(&b).div_exact(&b), Some(a.clone()));
        assert_eq!(a.div_exact(&poly(&[2])), None);
    }

    #[test]
    fn unknot_is_one() {
        let p = KnotPresentation::new(vec!["a".into()], vec![]).unwrap();
        assert_eq!(fox_alexander(&p).unwrap(), Laurent::one());
    }

    #[test]
    fn trefoil_wirtinger() {
        let p =
            KnotPresentation::new(vec!["x".into(), "y".into(), "z".into()], vec!["x y Z Y".into(), "y z X Z".into()])
                .unwrap();
        // By hand: rows (1, t - 1, -t) and (-t, 1, t - 1); deleting z leaves
        // det [[1, t - 1], [-t, 1]] = t^2 - t + 1.
        let m = p.fox_matrix().unwrap();
        assert_eq!(m[0][0], Laurent::one());
        assert_eq!(m[0][1], poly(&[-1, 1]));
        assert_eq!(fox_alexander(&p).unwrap(), poly(&[1, -1, 1]));
    }

    #[test]
    fn figure_eight_from_braid() {
        let p = KnotPresentation::from_braid(3, &[1, -2, 1, -2]).unwrap();
        assert_eq!(fox_alexander(&p).unwrap(), poly(&[1, -3, 1]));
    }

    #[test]
    fn wrong_deficiency_rejected() {
        let err = KnotPresentation::new(vec!["a".into(), "b".into()], vec![]).unwrap_err();
        assert!(matches!(err, Error::Presentation(_)));
    }

    #[test]
    fn unknown_letter_rejected() {
        let err = KnotPresentation::new(vec!["a".into(), "b".into()], vec!["a Q".into()]).unwrap_err();
        assert!(matches!(err, Error::Presentation(_)));
    }
}
