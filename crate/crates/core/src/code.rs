//! Generalized Reed-Muller codes: evaluations of all `m`-variate polynomials of
//! degree at most `r` at every point of `F_q^m`.
//!
//! Codeword position `j` holds the evaluation at the point with index `j`.
//! Systematic encoding uses an information set: the lexicographically first
//! `k` linearly independent columns of the evaluation matrix. The systematic
//! generator `[I_k | P]` and parity-check matrix `[-P^T | I_{n-k}]` are
//! expressed in permuted coordinates (information set first); the permutation
//! maps them back to evaluation points.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, LineIndex, Point};
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg::Matrix;

/// Upper bound on `k * n` so the dense generator matrix stays in memory.
const MAX_GENERATOR_ENTRIES: usize = 1 << 26;

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCodeParams")]
pub struct CodeParams {
    pub r: usize,
    pub m: usize,
    pub q: usize,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub locality: usize,
}

#[derive(Deserialize)]
struct RawCodeParams {
    r: usize,
    m: usize,
    q: usize,
}

impl TryFrom<RawCodeParams> for CodeParams {
    type Error = Error;

    fn try_from(raw: RawCodeParams) -> Result<Self> {
        CodeParams::new(raw.r, raw.m, raw.q)
    }
}

impl CodeParams {
    /// Validates `(r, m, q)` and derives `n = q^m`, `k = C(m+r, r)`, `d = (q-r) q^(m-1)`.
    pub fn new(r: usize, m: usize, q: usize) -> Result<Self> {
        if crate::gf::prime_power(q).is_none() || q > crate::gf::MAX_ORDER {
            return Err(Error::Parameter(format!(
                "q={q} is not a supported prime power"
            )));
        }
        if m == 0 {
            return Err(Error::Parameter("m must be at least 1".into()));
        }
        if r == 0 || r + 2 > q {
            return Err(Error::Parameter(format!(
                "degree r={r} must satisfy 1 <= r <= q-2 = {}",
                q as isize - 2
            )));
        }
        let n = geometry::space_size(q, m)?;
        let k = binomial(m + r, r);
        if n.checked_mul(k).is_none_or(|e| e > MAX_GENERATOR_ENTRIES) {
            return Err(Error::Parameter(format!(
                "code (r={r}, m={m}, q={q}) is too large: n={n}, k={k}"
            )));
        }
        let d = (q - r) * (n / q);
        Ok(CodeParams {
            r,
            m,
            q,
            n,
            k,
            d,
            locality: r + 1,
        })
    }

    pub fn line_count(&self) -> usize {
        geometry::line_count(self.q, self.m)
    }

    pub fn lines_per_point(&self) -> usize {
        geometry::lines_per_point(self.q, self.m)
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GRM(r={}, m={}, q={})", self.r, self.m, self.q)
    }
}

/// Exponent vectors of the monomials of total degree `<= r`, in graded
/// lexicographic order: by total degree, then with higher powers of earlier
/// variables first (`1, X_1, X_2, X_1^2, X_1 X_2, X_2^2, ...`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    exponents: Vec<Vec<usize>>,
}

impl MonomialBasis {
    pub fn new(m: usize, r: usize) -> MonomialBasis {
        fn fill(prefix: &mut Vec<usize>, m: usize, budget: usize, out: &mut Vec<Vec<usize>>) {
            if prefix.len() == m {
                out.push(prefix.clone());
                return;
            }
            for a in 0..=budget {
                prefix.push(a);
                fill(prefix, m, budget - a, out);
                prefix.pop();
            }
        }
        let mut exponents = Vec::new();
        fill(&mut Vec::with_capacity(m), m, r, &mut exponents);
        exponents.sort_by(|a, b| {
            let (da, db) = (a.iter().sum::<usize>(), b.iter().sum::<usize>());
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        MonomialBasis { exponents }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[Vec<usize>] {
        &self.exponents
    }

    /// Position of a monomial in the basis.
    pub fn position(&self, exponent: &[usize]) -> Option<usize> {
        self.exponents.iter().position(|e| e == exponent)
    }

    pub fn eval_monomial(
        &self,
        field: &FieldSpec,
        which: usize,
        pt: &[FieldElement],
    ) -> FieldElement {
        self.exponents[which]
            .iter()
            .zip(pt)
            .fold(FieldElement::ONE, |acc, (&a, &x)| {
                field.mul(acc, field.pow(x, a))
            })
    }
}

/// A fully constructed GRM code. Immutable; share behind `&` or `Arc`.
#[derive(Debug, Clone)]
pub struct GrmCode {
    params: CodeParams,
    field: FieldSpec,
    basis: MonomialBasis,
    points: Vec<Point>,
    generator: Matrix,
    reduced_generator: Matrix,
    info_set: Vec<usize>,
    permutation: Vec<usize>,
    systematic: Matrix,
    parity_check: Matrix,
    parity_natural: Matrix,
    info_mask: Arc<[bool]>,
    lines: LineIndex,
}

impl GrmCode {
    pub fn new(r: usize, m: usize, q: usize) -> Result<GrmCode> {
        GrmCode::from_params(CodeParams::new(r, m, q)?)
    }

    pub fn from_params(params: CodeParams) -> Result<GrmCode> {
        let CodeParams { r, m, q, n, k, .. } = params;
        let field = FieldSpec::new(q)?;
        let basis = MonomialBasis::new(m, r);
        debug_assert_eq!(basis.len(), k);
        let points = geometry::enumerate_points(q, m);

        let generator = Matrix::from_fn(k, n, |i, j| {
            basis.eval_monomial(&field, i, &points[j].coords)
        });

        let mut reduced_generator = generator.clone();
        let info_set = reduced_generator.rref(&field, n);
        if info_set.len() != k {
            return Err(Error::Integrity(format!(
                "generator rank {} below k={k}",
                info_set.len()
            )));
        }

        let mut is_info = vec![false; n];
        for &j in &info_set {
            is_info[j] = true;
        }
        let permutation: Vec<usize> = info_set
            .iter()
            .copied()
            .chain((0..n).filter(|&j| !is_info[j]))
            .collect();

        let systematic = reduced_generator.select_columns(&permutation);
        let redundancy = n - k;
        let parity_check = Matrix::from_fn(redundancy, n, |i, c| {
            if c < k {
                field.neg(systematic.get(c, k + i))
            } else {
                FieldElement(u8::from(c - k == i))
            }
        });
        let mut parity_natural = Matrix::zeros(redundancy, n);
        for (c, &j) in permutation.iter().enumerate() {
            for i in 0..redundancy {
                parity_natural.set(i, j, parity_check.get(i, c));
            }
        }

        let lines = LineIndex::new(&field, m);
        Ok(GrmCode {
            params,
            field,
            basis,
            points,
            generator,
            reduced_generator,
            info_set,
            permutation,
            systematic,
            parity_check,
            parity_natural,
            info_mask: is_info.into(),
            lines,
        })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Raw `k x n` evaluation matrix; row `i` is basis monomial `i` at every point.
    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    /// Information-set positions in increasing order.
    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    pub fn info_mask(&self) -> &Arc<[bool]> {
        &self.info_mask
    }

    pub fn is_info(&self, position: usize) -> bool {
        self.info_mask[position]
    }

    /// `permutation[c]` is the codeword position of permuted column `c`.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// `[I_k | P]` in permuted coordinates.
    pub fn systematic_generator(&self) -> &Matrix {
        &self.systematic
    }

    /// `[-P^T | I_{n-k}]` in permuted coordinates.
    pub fn parity_check(&self) -> &Matrix {
        &self.parity_check
    }

    /// The parity-check matrix with columns in codeword (evaluation point) order.
    pub fn parity_check_natural(&self) -> &Matrix {
        &self.parity_natural
    }

    pub fn lines(&self) -> &LineIndex {
        &self.lines
    }

    fn check_len(expected: usize, got: usize) -> Result<()> {
        if expected == got {
            Ok(())
        } else {
            Err(Error::LengthMismatch { expected, got })
        }
    }

    /// Systematic encoding: the result carries `message[i]` at `info_set()[i]`.
    pub fn encode(&self, message: &[FieldElement]) -> Result<Vec<FieldElement>> {
        Self::check_len(self.params.k, message.len())?;
        Ok(self.reduced_generator.left_mul_vec(&self.field, message))
    }

    /// Evaluates the polynomial with the given basis coefficients at every point.
    pub fn encode_coefficients(&self, coeffs: &[FieldElement]) -> Result<Vec<FieldElement>> {
        Self::check_len(self.params.k, coeffs.len())?;
        Ok(self.generator.left_mul_vec(&self.field, coeffs))
    }

    /// Reads the message back from the information-set positions.
    pub fn extract_message(&self, codeword: &[FieldElement]) -> Result<Vec<FieldElement>> {
        Self::check_len(self.params.n, codeword.len())?;
        Ok(self.info_set.iter().map(|&j| codeword[j]).collect())
    }

    /// `Σ coeffs_j · Π pt_i^(a_i)` over the monomial basis.
    pub fn eval_poly(&self, coeffs: &[FieldElement], pt: &Point) -> FieldElement {
        coeffs
            .iter()
            .enumerate()
            .fold(FieldElement::ZERO, |acc, (j, &c)| {
                if c.is_zero() {
                    acc
                } else {
                    self.field
                        .mul_add(c, self.basis.eval_monomial(&self.field, j, &pt.coords), acc)
                }
            })
    }

    /// `H y^T = 0`.
    pub fn is_codeword(&self, word: &[FieldElement]) -> bool {
        word.len() == self.params.n
            && (0..self.parity_natural.rows()).all(|i| {
                self.parity_natural
                    .row(i)
                    .iter()
                    .zip(word)
                    .fold(FieldElement::ZERO, |acc, (&h, &y)| {
                        self.field.mul_add(h, y, acc)
                    })
                    .is_zero()
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rsline::{interpolate_line, LineView};

    #[test]
    fn parameter_formulas() {
        let p = CodeParams::new(6, 2, 8).unwrap();
        assert_eq!((p.n, p.k, p.d, p.locality), (64, 28, 16, 7));
        let p = CodeParams::new(2, 2, 4).unwrap();
        assert_eq!((p.n, p.k, p.d), (16, 6, 8));
        let p = CodeParams::new(1, 2, 3).unwrap();
        assert_eq!((p.n, p.k, p.d), (9, 3, 6));
        assert_eq!(CodeParams::new(2, 3, 4).unwrap().k, 10);
        assert_eq!(binomial(10, 3), 120);
    }

    #[test]
    fn parameter_errors() {
        assert!(CodeParams::new(7, 2, 8).is_err());
        assert!(CodeParams::new(0, 2, 8).is_err());
        assert!(CodeParams::new(1, 0, 8).is_err());
        assert!(CodeParams::new(1, 2, 6).is_err());
        assert!(CodeParams::new(1, 2, 2).is_err());
        assert!(CodeParams::new(3, 4, 256).is_err());
    }

    #[test]
    fn params_json_round_trip() {
        let p: CodeParams = serde_json::from_str(r#"{"r":6,"m":2,"q":8}"#).unwrap();
        assert_eq!(p, CodeParams::new(6, 2, 8).unwrap());
        let back: CodeParams = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<CodeParams>(r#"{"r":7,"m":2,"q":8}"#).is_err());
    }

    #[test]
    fn monomial_order() {
        let b = MonomialBasis::new(2, 2);
        assert_eq!(
            b.exponents(),
            &[
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
        for (m, r) in [(1, 3), (2, 6), (3, 2), (4, 3)] {
            let b = MonomialBasis::new(m, r);
            assert_eq!(b.len(), binomial(m + r, r));
            let mut d = b.exponents().to_vec();
            d.dedup();
            assert_eq!(d.len(), b.len());
            assert!(b.exponents().iter().all(|e| e.iter().sum::<usize>() <= r));
        }
    }

    #[test]
    fn eval_poly_examples() {
        let code = GrmCode::new(2, 2, 4).unwrap();
        let f = code.field();
        let mut constant = vec![FieldElement::ZERO; 6];
        constant[0] = FieldElement::ONE;
        for pt in code.points() {
            assert_eq!(code.eval_poly(&constant, pt), FieldElement::ONE);
        }
        let mut x1x2 = vec![FieldElement::ZERO; 6];
        x1x2[code.basis().position(&[1, 1]).unwrap()] = FieldElement::ONE;
        let a = f.alpha();
        let pt = Point::from_coords(4, vec![a, a]);
        assert_eq!(code.eval_poly(&x1x2, &pt), f.exp(2));
    }

    #[test]
    fn coefficient_encoding_of_x1() {
        let code = GrmCode::new(1, 2, 3).unwrap();
        let mut coeffs = vec![FieldElement::ZERO; 3];
        coeffs[code.basis().position(&[1, 0]).unwrap()] = FieldElement::ONE;
        let word = code.encode_coefficients(&coeffs).unwrap();
        let expected: Vec<_> = code.points().iter().map(|p| p.coords[0]).collect();
        assert_eq!(word, expected);
        assert!(code.is_codeword(&word));
    }

    #[test]
    fn matrix_identities() {
        for (r, m, q) in [
            (1, 2, 3),
            (2, 2, 4),
            (6, 2, 8),
            (2, 2, 5),
            (1, 3, 3),
            (3, 2, 9),
            (2, 3, 4),
            (1, 1, 7),
        ] {
            let code = GrmCode::new(r, m, q).unwrap();
            let f = code.field();
            let k = code.params().k;
            assert_eq!(code.generator().rank(f), k);
            assert_eq!(code.info_set().len(), k);
            assert!(code
                .systematic_generator()
                .mul(f, &code.parity_check().transpose())
                .is_zero());
            assert!(code
                .generator()
                .mul(f, &code.parity_check_natural().transpose())
                .is_zero());
            let gsys = code.systematic_generator();
            assert_eq!(
                gsys.select_columns(&(0..k).collect::<Vec<_>>()),
                Matrix::identity(k)
            );
            // every row of G is one monomial evaluated at every point
            for i in 0..k {
                for (j, pt) in code.points().iter().enumerate() {
                    assert_eq!(
                        code.generator().get(i, j),
                        code.basis().eval_monomial(f, i, &pt.coords)
                    );
                }
            }
        }
    }

    #[test]
    fn info_set_is_greedy_first_independent() {
        let code = GrmCode::new(2, 2, 4).unwrap();
        let f = code.field();
        let g = code.generator();
        let mut chosen: Vec<usize> = Vec::new();
        for j in 0..code.params().n {
            let mut trial = chosen.clone();
            trial.push(j);
            if g.select_columns(&trial).rank(f) == trial.len() {
                chosen = trial;
            }
        }
        assert_eq!(code.info_set(), &chosen[..]);
    }

    #[test]
    fn systematic_round_trip_and_distance() {
        let code = GrmCode::new(1, 2, 3).unwrap();
        let mut min_weight = usize::MAX;
        for v in 0..27usize {
            let msg: Vec<_> = (0..3)
                .map(|i| FieldElement(((v / 3usize.pow(i)) % 3) as u8))
                .collect();
            let word = code.encode(&msg).unwrap();
            assert!(code.is_codeword(&word));
            assert_eq!(code.extract_message(&word).unwrap(), msg);
            if v != 0 {
                min_weight = min_weight.min(word.iter().filter(|x| !x.is_zero()).count());
            } else {
                assert!(word.iter().all(|x| x.is_zero()));
            }
        }
        assert_eq!(min_weight, 6);
    }

    #[test]
    fn length_mismatch() {
        let code = GrmCode::new(1, 2, 3).unwrap();
        assert_eq!(
            code.encode(&[FieldElement::ZERO; 2]),
            Err(Error::LengthMismatch {
                expected: 3,
                got: 2
            })
        );
        assert!(code.extract_message(&[FieldElement::ZERO; 8]).is_err());
    }

    #[test]
    fn line_restriction_is_low_degree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for (r, m, q) in [(1, 2, 3), (2, 2, 4), (6, 2, 8), (2, 3, 4), (3, 2, 7)] {
            let code = GrmCode::new(r, m, q).unwrap();
            let f = code.field();
            for _ in 0..5 {
                let msg: Vec<_> = (0..code.params().k)
                    .map(|_| FieldElement(rng.random_range(0..q) as u8))
                    .collect();
                let word = code.encode(&msg).unwrap();
                for line in code.lines().lines() {
                    let restricted: Vec<_> = line.points.iter().map(|&p| word[p]).collect();
                    // keep only the last r+1 values, rebuild the rest
                    let view = LineView::new(
                        f,
                        (0..q)
                            .map(|i| (i + r + 1 >= q).then_some(restricted[i]))
                            .collect(),
                    );
                    assert_eq!(interpolate_line(f, &view, r).unwrap(), restricted);
                }
            }
        }
    }
}
