//! Points and lines of the affine space `F_q^m`.
//!
//! Every line `{P + γ V : γ ∈ F_q}` has a unique canonical form: the direction
//! is scaled so that its first nonzero coordinate (the pivot) is `1`, and the
//! base point is the unique point of the line whose pivot coordinate is `0`.
//! Enumerating pivots `0..m`, monic directions with that pivot, and base
//! points with a zero pivot coordinate therefore lists each line exactly once,
//! `q^(m-1) (q^m - 1) / (q - 1)` lines in total.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

/// A point of `F_q^m`. `index = Σ coords[j] * q^j` over enumeration indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub coords: Vec<FieldElement>,
    pub index: usize,
}

impl Point {
    pub fn from_index(q: usize, m: usize, index: usize) -> Point {
        let mut rest = index;
        let coords = (0..m)
            .map(|_| {
                let c = FieldElement((rest % q) as u8);
                rest /= q;
                c
            })
            .collect();
        Point { coords, index }
    }

    pub fn from_coords(q: usize, coords: Vec<FieldElement>) -> Point {
        let index = coords.iter().rev().fold(0, |acc, c| acc * q + c.index());
        Point { coords, index }
    }
}

/// A nonzero direction normalized so that `coords[pivot] = 1` and all earlier coordinates are zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Direction {
    pub coords: Vec<FieldElement>,
    pub pivot: usize,
}

impl Direction {
    /// Scales a nonzero vector to monic form. `None` for the zero vector.
    pub fn normalize(field: &FieldSpec, v: &[FieldElement]) -> Option<Direction> {
        let pivot = v.iter().position(|c| !c.is_zero())?;
        let scale = field.inv(v[pivot]).ok()?;
        let coords = v.iter().map(|&c| field.mul(scale, c)).collect();
        Some(Direction { coords, pivot })
    }

    /// Base-q index of the direction's coordinates.
    pub fn index(&self, q: usize) -> usize {
        self.coords
            .iter()
            .rev()
            .fold(0, |acc, c| acc * q + c.index())
    }
}

/// A line in canonical form. `points[i]` is the index of `base + γ_i · direction`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Line {
    pub base: Point,
    pub direction: Direction,
    pub points: Vec<usize>,
}

impl Line {
    fn build(field: &FieldSpec, base: Point, direction: Direction) -> Line {
        let q = field.order();
        let points = field
            .elements()
            .map(|g| {
                base.coords
                    .iter()
                    .zip(&direction.coords)
                    .rev()
                    .fold(0, |acc, (&b, &v)| acc * q + field.mul_add(g, v, b).index())
            })
            .collect();
        Line {
            base,
            direction,
            points,
        }
    }

    /// The canonical line through `u` with the given monic direction.
    pub fn through(field: &FieldSpec, u: &Point, direction: &Direction) -> Line {
        let t = u.coords[direction.pivot];
        let coords = u
            .coords
            .iter()
            .zip(&direction.coords)
            .map(|(&p, &v)| field.sub(p, field.mul(t, v)))
            .collect();
        let base = Point::from_coords(field.order(), coords);
        Line::build(field, base, direction.clone())
    }

    /// The canonical line through two distinct points.
    pub fn through_points(field: &FieldSpec, a: &Point, b: &Point) -> Result<Line> {
        let diff: Vec<_> = b
            .coords
            .iter()
            .zip(&a.coords)
            .map(|(&x, &y)| field.sub(x, y))
            .collect();
        let direction = Direction::normalize(field, &diff)
            .ok_or_else(|| Error::Parameter("a line needs two distinct points".into()))?;
        Ok(Line::through(field, a, &direction))
    }

    pub fn contains(&self, point: usize) -> bool {
        self.points.contains(&point)
    }

    /// Compact `pivot/directionIndex/baseIndex` rendering used in debug dumps.
    pub fn key(&self, q: usize) -> String {
        format!(
            "{}/{}/{}",
            self.direction.pivot,
            self.direction.index(q),
            self.base.index
        )
    }
}

/// `q^m`, or an error if it overflows.
pub fn space_size(q: usize, m: usize) -> Result<usize> {
    u32::try_from(m)
        .ok()
        .and_then(|m| q.checked_pow(m))
        .ok_or_else(|| Error::Parameter(format!("q^m overflows for q={q}, m={m}")))
}

/// Number of canonical lines, `q^(m-1) (q^m - 1) / (q - 1)`.
pub fn line_count(q: usize, m: usize) -> usize {
    q.pow(m as u32 - 1) * lines_per_point(q, m)
}

/// Number of lines through any point, `(q^m - 1) / (q - 1)`.
pub fn lines_per_point(q: usize, m: usize) -> usize {
    (q.pow(m as u32) - 1) / (q - 1)
}

pub fn enumerate_points(q: usize, m: usize) -> Vec<Point> {
    (0..q.pow(m as u32))
        .map(|i| Point::from_index(q, m, i))
        .collect()
}

/// Monic directions grouped by pivot, free coordinates in base-q order.
pub fn monic_directions(q: usize, m: usize) -> Vec<Direction> {
    let mut out = Vec::with_capacity(lines_per_point(q, m));
    for pivot in 0..m {
        let free = m - pivot - 1;
        for tail in 0..q.pow(free as u32) {
            let tail = Point::from_index(q, free, tail);
            let mut coords = vec![FieldElement::ZERO; pivot];
            coords.push(FieldElement::ONE);
            coords.extend(tail.coords);
            out.push(Direction { coords, pivot });
        }
    }
    out
}

/// All lines of `F_q^m`, each exactly once, ordered by (pivot, direction, base index).
pub fn enumerate_lines(field: &FieldSpec, m: usize) -> Vec<Line> {
    let q = field.order();
    let mut lines = Vec::with_capacity(line_count(q, m));
    for direction in monic_directions(q, m) {
        let pivot = direction.pivot;
        for rest in 0..q.pow(m as u32 - 1) {
            let mut coords = Point::from_index(q, m - 1, rest).coords;
            coords.insert(pivot, FieldElement::ZERO);
            let base = Point::from_coords(q, coords);
            lines.push(Line::build(field, base, direction.clone()));
        }
    }
    lines
}

/// The `(q^m - 1) / (q - 1)` canonical lines containing `u`, one per monic direction.
pub fn lines_through_point(field: &FieldSpec, m: usize, u: &Point) -> Vec<Line> {
    monic_directions(field.order(), m)
        .iter()
        .map(|d| Line::through(field, u, d))
        .collect()
}

/// Counts lines by grouping every unordered pair of points into the point set
/// `{a + t (b - a)}`. Independent of the canonical-form enumeration.
pub fn brute_force_line_count(field: &FieldSpec, m: usize) -> usize {
    let q = field.order();
    let points = enumerate_points(q, m);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let mut set: Vec<usize> = field
                .elements()
                .map(|t| {
                    let coords = a
                        .coords
                        .iter()
                        .zip(&b.coords)
                        .map(|(&x, &y)| field.add(x, field.mul(t, field.sub(y, x))))
                        .collect();
                    Point::from_coords(q, coords).index
                })
                .collect();
            set.sort_unstable();
            seen.insert(set);
        }
    }
    seen.len()
}

/// All lines of a space plus the point -> incident-line index.
#[derive(Debug, Clone)]
pub struct LineIndex {
    lines: Vec<Line>,
    incident: Vec<Vec<u32>>,
}

impl LineIndex {
    pub fn new(field: &FieldSpec, m: usize) -> LineIndex {
        let lines = enumerate_lines(field, m);
        let n = field.order().pow(m as u32);
        let mut incident = vec![Vec::with_capacity(lines_per_point(field.order(), m)); n];
        for (id, line) in lines.iter().enumerate() {
            for &p in &line.points {
                incident[p].push(id as u32);
            }
        }
        LineIndex { lines, incident }
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn line(&self, id: usize) -> &Line {
        &self.lines[id]
    }

    /// Ids of the lines through `point`.
    pub fn incident(&self, point: usize) -> &[u32] {
        &self.incident[point]
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.points.len();
        write!(f, "{}", self.key(q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: usize) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    #[test]
    fn points_are_little_endian_base_q() {
        let pts = enumerate_points(3, 1);
        assert_eq!(
            pts.iter().map(|p| p.index).collect::<Vec<_>>(),
            vec![0, 1, 2]
        );

        let pts = enumerate_points(2, 2);
        let coords: Vec<Vec<u8>> = pts
            .iter()
            .map(|p| p.coords.iter().map(|c| c.0).collect())
            .collect();
        assert_eq!(coords, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(enumerate_points(8, 2).len(), 64);

        for p in enumerate_points(4, 3) {
            assert_eq!(Point::from_coords(4, p.coords.clone()), p);
        }
    }

    #[test]
    fn line_counts() {
        assert_eq!(enumerate_lines(&field(3), 2).len(), 12);
        assert_eq!(enumerate_lines(&field(8), 2).len(), 72);
        assert_eq!(enumerate_lines(&field(2), 1).len(), 1);
        assert_eq!(line_count(4, 3), 336);
        assert_eq!(enumerate_lines(&field(4), 3).len(), 336);
    }

    #[test]
    fn lines_through_point_counts() {
        let f3 = field(3);
        for u in enumerate_points(3, 2) {
            assert_eq!(lines_through_point(&f3, 2, &u).len(), 4);
        }
        let f8 = field(8);
        assert_eq!(
            lines_through_point(&f8, 2, &Point::from_index(8, 2, 37)).len(),
            9
        );
        let f2 = field(2);
        let only = lines_through_point(&f2, 1, &Point::from_index(2, 1, 0));
        assert_eq!(only.len(), 1);
        assert_eq!(only[0].points, vec![0, 1]);
    }

    #[test]
    fn canonical_form_invariants() {
        for (q, m) in [(2, 3), (3, 2), (4, 2), (5, 2), (3, 3), (8, 2), (9, 2)] {
            let f = field(q);
            for line in enumerate_lines(&f, m) {
                let pivot = line.direction.pivot;
                assert_eq!(line.direction.coords[pivot], FieldElement::ONE);
                assert!(line.direction.coords[..pivot].iter().all(|c| c.is_zero()));
                assert!(line.base.coords[pivot].is_zero());
                assert_eq!(line.points[0], line.base.index);

                let mut sorted = line.points.clone();
                sorted.sort_unstable();
                sorted.dedup();
                assert_eq!(sorted.len(), q, "points must be distinct");

                let zero_pivot: Vec<_> = line
                    .points
                    .iter()
                    .filter(|&&p| Point::from_index(q, m, p).coords[pivot].is_zero())
                    .collect();
                assert_eq!(zero_pivot, vec![&line.base.index]);

                // re-deriving from any two of its points gives the same canonical line
                let a = Point::from_index(q, m, line.points[q - 1]);
                let b = Point::from_index(q, m, line.points[0]);
                assert_eq!(Line::through_points(&f, &a, &b).unwrap(), line);
            }
        }
    }

    #[test]
    fn every_pair_on_exactly_one_line() {
        for (q, m) in [
            (2, 2),
            (3, 2),
            (4, 2),
            (2, 4),
            (3, 3),
            (4, 3),
            (5, 2),
            (7, 2),
            (16, 2),
        ] {
            let f = field(q);
            let n = q.pow(m as u32);
            let mut cover = vec![0u16; n * n];
            for line in enumerate_lines(&f, m) {
                for &a in &line.points {
                    for &b in &line.points {
                        if a != b {
                            cover[a * n + b] += 1;
                        }
                    }
                }
            }
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(
                        cover[a * n + b],
                        u16::from(a != b),
                        "q={q} m={m} pair ({a},{b})"
                    );
                }
            }
            assert_eq!(line_count(q, m) * q, n * lines_per_point(q, m));
        }
    }

    #[test]
    fn lines_through_point_matches_filter() {
        for (q, m) in [(3, 2), (4, 2), (2, 3), (3, 3)] {
            let f = field(q);
            let all = enumerate_lines(&f, m);
            for u in enumerate_points(q, m) {
                let mut through = lines_through_point(&f, m, &u);
                let mut filtered: Vec<_> = all
                    .iter()
                    .filter(|l| l.contains(u.index))
                    .cloned()
                    .collect();
                through.sort_by_key(|l| l.points.clone());
                filtered.sort_by_key(|l| l.points.clone());
                assert_eq!(through, filtered);
            }
        }
    }

    #[test]
    fn incidence_index() {
        let f = field(4);
        let idx = LineIndex::new(&f, 2);
        for p in 0..16 {
            assert_eq!(idx.incident(p).len(), 5);
            for &id in idx.incident(p) {
                assert!(idx.line(id as usize).contains(p));
            }
        }
    }

    #[test]
    fn brute_force_small() {
        assert_eq!(brute_force_line_count(&field(3), 2), 12);
        assert_eq!(brute_force_line_count(&field(2), 2), 6);
        assert_eq!(brute_force_line_count(&field(2), 1), 1);
    }

    #[test]
    fn line_key_rendering() {
        let f = field(3);
        let lines = enumerate_lines(&f, 2);
        assert_eq!(lines[0].key(3), "0/1/0");
        assert_eq!(lines[0].to_string(), "0/1/0");
        assert_eq!(lines.last().unwrap().key(3), "1/3/2");
    }

    #[test]
    fn space_size_overflow() {
        assert_eq!(space_size(8, 2).unwrap(), 64);
        assert!(space_size(256, 9).is_err());
    }
}
