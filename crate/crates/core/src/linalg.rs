//! Exact dense matrices over `BigRational`, fraction-free determinants and
//! the `Δ^{rows,cols}` deletion notation relative to a labelled ground set.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::circ::{CircularPair, Label, NonSymPair};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("rows have inconsistent lengths ({0} vs {1})")]
    Ragged(usize, usize),
    #[error("{what} label {label} is not in the ground set")]
    UnknownLabel { what: &'static str, label: Label },
    #[error("label {0} appears twice in the ground set")]
    DuplicateLabel(Label),
    #[error("index {index} out of range for a matrix of size {size}")]
    OutOfRange { index: usize, size: usize },
    #[error("deleting leaves a {rows}x{cols} block")]
    NonSquareMinor { rows: usize, cols: usize },
    #[error("matrix is {rows}x{cols}, expected {want}")]
    Shape { rows: usize, cols: usize, want: String },
    #[error("labels are out of order: {0}")]
    Order(String),
    #[error("limiting identity needs even n with 1 <= k <= n/2 - 2, got n = {n}, k = {k}")]
    BadLimiting { n: usize, k: usize },
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(x: i64) -> Rational {
    BigRational::from_integer(BigInt::from(x))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational, LinalgError> {
    let bad = || LinalgError::Parse(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Row-major dense matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| format_rational(self.get(i, j))).collect()).collect();
        f.debug_struct("ExactMatrix").field("rows", &self.rows).field("cols", &self.cols).field("entries", &rows).finish()
    }
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(LinalgError::Ragged(c, row.len()));
            }
            data.extend(row);
        }
        Ok(ExactMatrix { rows: r, cols: c, data })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, LinalgError> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, x: Rational) {
        self.data[i * self.cols + j] = x;
    }
    /// 1-based access by boundary labels.
    pub fn at(&self, i: Label, j: Label) -> &Rational {
        self.get(i as usize - 1, j as usize - 1)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn has_zero_row_sums(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).fold(Rational::zero(), |acc, j| acc + self.get(i, j)).is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape {
                rows: other.rows,
                cols: other.cols,
                want: format!("{} rows", self.cols),
            });
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Rational::zero(), |acc, t| acc + self.get(i, t) * other.get(t, j))
        }))
    }

    /// Submatrix on the given 0-based row and column indices, in that order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Result<Self, LinalgError> {
        for &i in rows {
            if i >= self.rows {
                return Err(LinalgError::OutOfRange { index: i, size: self.rows });
            }
        }
        for &j in cols {
            if j >= self.cols {
                return Err(LinalgError::OutOfRange { index: j, size: self.cols });
            }
        }
        Ok(Self::from_fn(rows.len(), cols.len(), |a, b| self.get(rows[a], cols[b]).clone()))
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| format_rational(self.get(i, j))).collect()).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.data.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// Fraction-free elimination over the integers: each row is scaled by the lcm
/// of its denominators, Bareiss runs on the integer matrix, and the scaling
/// is divided out at the end.
pub fn determinant(m: &ExactMatrix) -> Result<Rational, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows, cols: m.cols });
    }
    Ok(det_square(m.rows, |i, j| m.get(i, j)))
}

fn det_square<'a>(n: usize, entry: impl Fn(usize, usize) -> &'a Rational) -> Rational {
    match n {
        0 => return Rational::one(),
        1 => return entry(0, 0).clone(),
        2 => return entry(0, 0) * entry(1, 1) - entry(0, 1) * entry(1, 0),
        _ => {}
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let l = (0..n).fold(BigInt::one(), |acc, j| acc.lcm(entry(i, j).denom()));
        a.push((0..n).map(|j| entry(i, j).numer() * (&l / entry(i, j).denom())).collect());
        scale *= l;
    }
    let det = bareiss(&mut a);
    BigRational::new(det, scale)
}

/// Determinant of a square integer matrix, destroying it.
pub fn bareiss(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Determinant of the block `(m[r][c])` for 1-based labels, as ordered.
pub fn minor_by_labels(m: &ExactMatrix, rows: &[Label], cols: &[Label]) -> Rational {
    debug_assert_eq!(rows.len(), cols.len());
    det_square(rows.len(), |i, j| m.at(rows[i], cols[j]))
}

/// Ordered labels of the rows and of the columns of a block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundSet {
    pub rows: Vec<Label>,
    pub cols: Vec<Label>,
}

impl GroundSet {
    pub fn new(rows: Vec<Label>, cols: Vec<Label>) -> Result<Self, LinalgError> {
        for list in [&rows, &cols] {
            let mut seen = 0u64;
            for &x in list.iter() {
                if x == 0 || x as usize > 64 {
                    return Err(LinalgError::OutOfRange { index: x as usize, size: 64 });
                }
                let b = 1u64 << (x - 1);
                if seen & b != 0 {
                    return Err(LinalgError::DuplicateLabel(x));
                }
                seen |= b;
            }
        }
        Ok(GroundSet { rows, cols })
    }

    fn row_pos(&self, x: Label) -> Result<usize, LinalgError> {
        self.rows.iter().position(|&r| r == x).ok_or(LinalgError::UnknownLabel { what: "row", label: x })
    }
    fn col_pos(&self, x: Label) -> Result<usize, LinalgError> {
        self.cols.iter().position(|&c| c == x).ok_or(LinalgError::UnknownLabel { what: "column", label: x })
    }

    /// Labels left after deleting, in ground order.
    pub fn remaining(&self, del_rows: &[Label], del_cols: &[Label]) -> Result<(Vec<Label>, Vec<Label>), LinalgError> {
        for &x in del_rows {
            self.row_pos(x)?;
        }
        for &x in del_cols {
            self.col_pos(x)?;
        }
        let r: Vec<Label> = self.rows.iter().copied().filter(|x| !del_rows.contains(x)).collect();
        let c: Vec<Label> = self.cols.iter().copied().filter(|x| !del_cols.contains(x)).collect();
        Ok((r, c))
    }
}

/// `Δ^{del_rows,del_cols}`: the determinant of the ground block with the given
/// rows and columns removed. Labels index `m` 1-based.
pub fn delta(m: &ExactMatrix, g: &GroundSet, del_rows: &[Label], del_cols: &[Label]) -> Result<Rational, LinalgError> {
    let (r, c) = g.remaining(del_rows, del_cols)?;
    if r.len() != c.len() {
        return Err(LinalgError::NonSquareMinor { rows: r.len(), cols: c.len() });
    }
    for &x in r.iter().chain(&c) {
        if x as usize > m.rows.max(m.cols) {
            return Err(LinalgError::OutOfRange { index: x as usize, size: m.rows });
        }
    }
    Ok(minor_by_labels(m, &r, &c))
}

/// Signed circular minor `(-1)^k det M(P;Q)`.
///
/// Response matrices here carry the Kirchhoff sign convention (positive
/// diagonal, nonpositive off-diagonal entries), under which `(-1)^k det` is
/// the quantity that is nonnegative on circular pairs. Every identity used in
/// this crate is homogeneous in the sizes of its terms, so the sign twist does
/// not affect any of them.
pub fn circular_minor(m: &ExactMatrix, p: &CircularPair) -> Result<Rational, LinalgError> {
    signed_minor(m, p.p(), p.q())
}

pub fn nonsym_minor(m: &ExactMatrix, p: &NonSymPair) -> Result<Rational, LinalgError> {
    signed_minor(m, p.p(), p.q())
}

pub(crate) fn signed_minor(m: &ExactMatrix, p: &[Label], q: &[Label]) -> Result<Rational, LinalgError> {
    for &x in p.iter().chain(q) {
        if x == 0 || x as usize > m.rows || x as usize > m.cols {
            return Err(LinalgError::OutOfRange { index: x as usize, size: m.rows });
        }
    }
    let d = minor_by_labels(m, p, q);
    Ok(if p.len() % 2 == 1 { -d } else { d })
}

fn check_order(g_list: &[Label], labels: &[Label], what: &str) -> Result<(), LinalgError> {
    let pos: Vec<usize> = labels
        .iter()
        .map(|&x| g_list.iter().position(|&y| y == x).ok_or(LinalgError::Order(format!("{what} label {x} missing"))))
        .collect::<Result<_, _>>()?;
    if pos.windows(2).all(|w| w[0] < w[1]) {
        Ok(())
    } else {
        Err(LinalgError::Order(format!("{what} labels {labels:?} are not in ground order")))
    }
}

/// `Δ^{a,c}Δ^{b,d} = Δ^{a,d}Δ^{b,c} + Δ^{ab,cd}Δ^{∅,∅}` on a square ground block
/// with `a` above `b` and `c` left of `d`.
pub fn check_gp1(m: &ExactMatrix, g: &GroundSet, a: Label, b: Label, c: Label, d: Label) -> Result<bool, LinalgError> {
    if g.rows.len() != g.cols.len() {
        return Err(LinalgError::NonSquareMinor { rows: g.rows.len(), cols: g.cols.len() });
    }
    check_order(&g.rows, &[a, b], "row")?;
    check_order(&g.cols, &[c, d], "column")?;
    let lhs = delta(m, g, &[a], &[c])? * delta(m, g, &[b], &[d])?;
    let rhs = delta(m, g, &[a], &[d])? * delta(m, g, &[b], &[c])? + delta(m, g, &[a, b], &[c, d])? * delta(m, g, &[], &[])?;
    Ok(lhs == rhs)
}

/// `Δ^{b,∅}Δ^{ac,d} = Δ^{a,∅}Δ^{bc,d} + Δ^{c,∅}Δ^{ab,d}` on a ground block with
/// one more row than columns, rows `a, b, c` top to bottom.
pub fn check_gp2(m: &ExactMatrix, g: &GroundSet, a: Label, b: Label, c: Label, d: Label) -> Result<bool, LinalgError> {
    if g.rows.len() != g.cols.len() + 1 {
        return Err(LinalgError::Shape {
            rows: g.rows.len(),
            cols: g.cols.len(),
            want: "one more row than columns".into(),
        });
    }
    check_order(&g.rows, &[a, b, c], "row")?;
    check_order(&g.cols, &[d], "column")?;
    let lhs = delta(m, g, &[b], &[])? * delta(m, g, &[a, c], &[d])?;
    let rhs = delta(m, g, &[a], &[])? * delta(m, g, &[b, c], &[d])? + delta(m, g, &[c], &[])? * delta(m, g, &[a, b], &[d])?;
    Ok(lhs == rhs)
}

/// Labels `(b, c, d, e, f, g)` and the ground block of the three-term identity
/// at the `k`-th seam pair on `n` vertices.
pub fn limiting_ground(n: usize, k: usize) -> Result<(GroundSet, [Label; 6]), LinalgError> {
    if n % 2 != 0 || k == 0 || n < 4 || k + 2 > n / 2 {
        return Err(LinalgError::BadLimiting { n, k });
    }
    let w = |x: i64| crate::circ::wrap(x, n);
    let (ni, ki, h) = (n as i64, k as i64, (n / 2) as i64);
    let rows: Vec<Label> = (0..=ki).map(|i| w(h + i)).collect();
    let mut cols: Vec<Label> = vec![2, 1];
    cols.extend((0..ki).map(|i| w(ni - i)));
    let labels = [w(h + ki - 1), w(h + ki), 2, 1, w(ni - ki + 2), w(ni - ki + 1)];
    Ok((GroundSet::new(rows, cols)?, labels))
}

/// The three-term identity behind the exchange at a seam pair:
/// `Δ^{∅,d}Δ^{c,fg}Δ^{bc,deg} + Δ^{∅,g}Δ^{c,de}Δ^{bc,dfg}
///   = Δ^{c,dg}(Δ^{b,de}Δ^{c,fg} − Δ^{b,fg}Δ^{c,de})`.
pub fn check_limiting_identity(m: &ExactMatrix, n: usize, k: usize) -> Result<bool, LinalgError> {
    let (g, [b, c, d, e, f, gg]) = limiting_ground(n, k)?;
    if m.rows() != n || m.cols() != n {
        return Err(LinalgError::Shape { rows: m.rows(), cols: m.cols(), want: format!("{n}x{n}") });
    }
    let dl = |r: &[Label], c: &[Label]| -> Result<Rational, LinalgError> {
        let mut cc: Vec<Label> = c.to_vec();
        cc.dedup();
        delta(m, &g, r, &cc)
    };
    let lhs = dl(&[], &[d])? * dl(&[c], &[f, gg])? * dl(&[b, c], &[d, e, gg])?
        + dl(&[], &[gg])? * dl(&[c], &[d, e])? * dl(&[b, c], &[d, f, gg])?;
    let rhs = dl(&[c], &[d, gg])? * (dl(&[b], &[d, e])? * dl(&[c], &[f, gg])? - dl(&[b], &[f, gg])? * dl(&[c], &[d, e])?);
    Ok(lhs == rhs)
}

pub fn is_positive(x: &Rational) -> bool {
    x.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_matrix, random_symmetric_zero_rowsum};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    // cofactor expansion, exponential but independent of elimination
    fn det_oracle(m: &ExactMatrix) -> Rational {
        let n = m.rows();
        if n == 0 {
            return Rational::one();
        }
        let mut total = Rational::zero();
        for j in 0..n {
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let sub = m.select(&rows, &cols).unwrap();
            let t = m.get(0, j) * det_oracle(&sub);
            if j % 2 == 0 {
                total += t;
            } else {
                total -= t;
            }
        }
        total
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&ExactMatrix::from_i64(&[&[2]]).unwrap()).unwrap(), rat_int(2));
        assert_eq!(determinant(&ExactMatrix::zeros(0, 0)).unwrap(), rat_int(1));
        assert_eq!(determinant(&ExactMatrix::from_i64(&[&[1, 2], &[3, 4]]).unwrap()).unwrap(), rat_int(-2));
        assert!(determinant(&ExactMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for size in 0..=6 {
            for _ in 0..10 {
                let m = random_matrix(size, size, &mut rng);
                assert_eq!(determinant(&m).unwrap(), det_oracle(&m));
            }
        }
        // a pivot swap is needed here
        let m = ExactMatrix::from_i64(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]).unwrap();
        assert_eq!(determinant(&m).unwrap(), det_oracle(&m));
    }

    #[test]
    fn delta_examples() {
        let m = ExactMatrix::from_i64(&[&[1, 2], &[3, 4]]).unwrap();
        let g = GroundSet::new(vec![1, 2], vec![1, 2]).unwrap();
        assert_eq!(delta(&m, &g, &[1], &[1]).unwrap(), rat_int(4));
        assert_eq!(delta(&m, &g, &[1, 2], &[1, 2]).unwrap(), rat_int(1));
        assert_eq!(delta(&m, &g, &[], &[]).unwrap(), rat_int(-2));
        assert!(delta(&m, &g, &[1], &[]).is_err());
        assert!(delta(&m, &g, &[3], &[1]).is_err());
    }

    #[test]
    fn circular_minor_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_symmetric_zero_rowsum(5, &mut rng);
        assert_eq!(circular_minor(&m, &CircularPair::empty(5)).unwrap(), rat_int(1));
        let x = CircularPair::new(5, vec![2], vec![4]).unwrap();
        assert_eq!(circular_minor(&m, &x).unwrap(), -m.at(2, 4).clone());
        for p in crate::circ::enumerate_pairs(5, None).iter() {
            let flip = p.rep().correspond();
            assert_eq!(circular_minor(&m, p).unwrap(), nonsym_minor(&m, &flip).unwrap());
        }
    }

    #[test]
    fn gp_examples() {
        let m = ExactMatrix::from_i64(&[&[3, 1], &[4, 1]]).unwrap();
        let g = GroundSet::new(vec![1, 2], vec![1, 2]).unwrap();
        assert!(check_gp1(&m, &g, 1, 2, 1, 2).unwrap());
        assert!(check_gp1(&m, &g, 2, 1, 1, 2).is_err());
        let z = ExactMatrix::from_i64(&[&[0, 0, 0], &[1, 2, 3], &[4, 5, 7]]).unwrap();
        let g3 = GroundSet::new(vec![1, 2, 3], vec![1, 2, 3]).unwrap();
        assert!(check_gp1(&z, &g3, 1, 3, 1, 2).unwrap());
        let m = ExactMatrix::from_i64(&[&[1, 2], &[3, 5], &[7, 11]]).unwrap();
        let g = GroundSet::new(vec![1, 2, 3], vec![1, 2]).unwrap();
        assert!(check_gp2(&m, &g, 1, 2, 3, 1).unwrap());
        assert!(check_gp2(&m, &g, 1, 2, 3, 2).unwrap());
        let rep = ExactMatrix::from_i64(&[&[1, 2], &[1, 2], &[7, 11]]).unwrap();
        assert!(check_gp2(&rep, &g, 1, 2, 3, 2).unwrap());
    }

    #[test]
    fn limiting_identity_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (n, k) in [(6, 1), (8, 1), (8, 2), (10, 3)] {
            for _ in 0..5 {
                let m = random_symmetric_zero_rowsum(n, &mut rng);
                assert!(check_limiting_identity(&m, n, k).unwrap(), "n={n} k={k}");
                let m = random_matrix(n, n, &mut rng);
                assert!(check_limiting_identity(&m, n, k).unwrap(), "n={n} k={k} non-symmetric");
            }
        }
        assert!(check_limiting_identity(&ExactMatrix::zeros(8, 8), 8, 2).unwrap());
        assert!(check_limiting_identity(&ExactMatrix::zeros(7, 7), 7, 1).is_err());
        assert!(check_limiting_identity(&ExactMatrix::zeros(8, 8), 8, 3).is_err());
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), rat_int(-4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(-2, 4)), "-1/2");
    }
}
