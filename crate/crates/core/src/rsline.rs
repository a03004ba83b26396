//! Erasure decoding of the `(q, r+1)` Reed-Solomon word that a GRM codeword
//! induces on one line.

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

/// Values along a line: `values[i]` is the symbol at abscissa `gamma[i]`, or `None` if erased.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineView {
    pub gamma: Vec<FieldElement>,
    pub values: Vec<Option<FieldElement>>,
    known_count: usize,
}

impl LineView {
    /// A view over all of `F_q` in enumeration order.
    pub fn new(field: &FieldSpec, values: Vec<Option<FieldElement>>) -> LineView {
        assert_eq!(values.len(), field.order(), "a line holds q values");
        LineView::with_abscissae(field.elements().collect(), values)
    }

    /// A view over arbitrary distinct abscissae.
    pub fn with_abscissae(gamma: Vec<FieldElement>, values: Vec<Option<FieldElement>>) -> LineView {
        assert_eq!(gamma.len(), values.len());
        let known_count = values.iter().filter(|v| v.is_some()).count();
        LineView {
            gamma,
            values,
            known_count,
        }
    }

    pub fn known_count(&self) -> usize {
        self.known_count
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Rebuilds every entry of `view` from the unique polynomial of degree `<= r`
/// through the first `r + 1` known entries (in abscissa order). Remaining
/// known entries are checked against that polynomial.
pub fn interpolate_line(field: &FieldSpec, view: &LineView, r: usize) -> Result<Vec<FieldElement>> {
    let mut out = vec![FieldElement::ZERO; view.len()];
    interpolate_into(field, &view.gamma, &view.values, r, &mut out)?;
    Ok(out)
}

/// Slice form of [`interpolate_line`] writing into `out` (same length as `values`).
pub fn interpolate_into(
    field: &FieldSpec,
    gamma: &[FieldElement],
    values: &[Option<FieldElement>],
    r: usize,
    out: &mut [FieldElement],
) -> Result<()> {
    const CAP: usize = crate::gf::MAX_ORDER;
    let mut xs = [FieldElement::ZERO; CAP];
    let mut ys = [FieldElement::ZERO; CAP];
    let mut support = 0;
    for (&x, v) in gamma.iter().zip(values) {
        if support > r {
            break;
        }
        if let Some(y) = *v {
            xs[support] = x;
            ys[support] = y;
            support += 1;
        }
    }
    if support < r + 1 {
        let known = values.iter().filter(|v| v.is_some()).count();
        return Err(Error::InsufficientSymbols {
            needed: r + 1,
            known,
        });
    }
    let (xs, ys) = (&xs[..support], &ys[..support]);

    // barycentric weights w_j = y_j / Π_{l != j} (x_j - x_l)
    let mut weights = [FieldElement::ZERO; CAP];
    for (j, &xj) in xs.iter().enumerate() {
        let denom = xs
            .iter()
            .enumerate()
            .filter(|&(l, _)| l != j)
            .fold(FieldElement::ONE, |acc, (_, &xl)| {
                field.mul(acc, field.sub(xj, xl))
            });
        let inv = field
            .inv(denom)
            .map_err(|_| Error::Parameter("interpolation abscissae must be distinct".into()))?;
        weights[j] = field.mul(ys[j], inv);
    }
    let weights = &weights[..support];

    for (i, &x) in gamma.iter().enumerate() {
        let value = match xs.iter().position(|&xj| xj == x) {
            Some(j) => ys[j],
            None => {
                // L(x) Σ w_j / (x - x_j), L(x) = Π (x - x_j)
                let mut node = FieldElement::ONE;
                let mut acc = FieldElement::ZERO;
                for (&xj, &wj) in xs.iter().zip(weights) {
                    let diff = field.sub(x, xj);
                    node = field.mul(node, diff);
                    acc = field.add(acc, field.mul(wj, field.inv(diff)?));
                }
                field.mul(node, acc)
            }
        };
        if let Some(known) = values[i] {
            if known != value {
                return Err(Error::Integrity(format!(
                    "line values are not a degree-{r} polynomial (mismatch at abscissa {x})"
                )));
            }
        }
        out[i] = value;
    }
    Ok(())
}

/// Additions-only decoding for `r = q - 2`: the `q` values of a degree
/// `q - 2` polynomial over all of `F_q` sum to zero, so a single erasure is
/// the negated sum of the others.
pub fn parity_sum_decode(
    field: &FieldSpec,
    view: &LineView,
    r: usize,
) -> Result<Vec<FieldElement>> {
    let q = field.order();
    if r + 2 != q || view.len() != q {
        return Err(Error::Parameter(format!(
            "parity decoding needs r = q - 2 over all of F_q (r={r}, q={q})"
        )));
    }
    if view.known_count() + 1 != q {
        return Err(Error::Parameter(format!(
            "parity decoding needs exactly one erasure, found {}",
            q - view.known_count()
        )));
    }
    Ok(view
        .values
        .iter()
        .map(|v| v.unwrap_or_else(|| parity_missing(field, &view.values)))
        .collect())
}

/// The negated sum of the known entries.
pub fn parity_missing(field: &FieldSpec, values: &[Option<FieldElement>]) -> FieldElement {
    field.neg(field.sum(values.iter().flatten().copied()))
}
