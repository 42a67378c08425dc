//! Dense exact linear algebra on small tensor-product spaces.
//!
//! A [`SpaceLayout`] fixes an ordered list of subsystems. Kets and operators
//! live on a *group* of those subsystems (a sorted set of subsystem indices);
//! their coefficients use the product basis of the group with the leftmost
//! subsystem as the slowest index.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::ExactScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),
    #[error("vector is not normalized (squared norm {0})")]
    NotNormalized(String),
    #[error("basis is not orthonormal: {0}")]
    NotOrthonormal(String),
    #[error("incomplete basis: {found} vectors for a space of dimension {expected}")]
    IncompleteBasis { expected: usize, found: usize },
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
}

/// One tensor factor: a named space with an ordered list of basis labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subsystem {
    pub name: String,
    pub labels: Vec<String>,
}

impl Subsystem {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceLayout {
    subsystems: Vec<Subsystem>,
}

/// Upper bound on the total dimension of a layout.
pub const MAX_TOTAL_DIM: usize = 256;

impl SpaceLayout {
    pub fn new(subsystems: Vec<Subsystem>) -> Result<Self, LinearError> {
        let mut total = 1usize;
        for (i, s) in subsystems.iter().enumerate() {
            if subsystems[..i].iter().any(|t| t.name == s.name) {
                return Err(LinearError::InvalidLayout(format!(
                    "duplicate subsystem `{}`",
                    s.name
                )));
            }
            if s.labels.is_empty() {
                return Err(LinearError::InvalidLayout(format!(
                    "subsystem `{}` has no basis labels",
                    s.name
                )));
            }
            for (j, l) in s.labels.iter().enumerate() {
                if s.labels[..j].contains(l) {
                    return Err(LinearError::InvalidLayout(format!(
                        "duplicate basis label `{l}` in `{}`",
                        s.name
                    )));
                }
            }
            total = total.saturating_mul(s.dim());
            if total > MAX_TOTAL_DIM {
                return Err(LinearError::InvalidLayout(format!(
                    "total dimension exceeds {MAX_TOTAL_DIM}"
                )));
            }
        }
        Ok(SpaceLayout { subsystems })
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn subsystem_index(&self, name: &str) -> Option<usize> {
        self.subsystems.iter().position(|s| s.name == name)
    }

    pub fn all(&self) -> Vec<usize> {
        (0..self.subsystems.len()).collect()
    }

    pub fn dim(&self) -> usize {
        self.group_dim(&self.all())
    }

    pub fn group_dim(&self, group: &[usize]) -> usize {
        group.iter().map(|&i| self.subsystems[i].dim()).product()
    }

    /// Splits a product-basis index of `group` into per-subsystem digits.
    pub fn digits(&self, group: &[usize], mut index: usize) -> Vec<usize> {
        let mut out = vec![0; group.len()];
        for (slot, &s) in group.iter().enumerate().rev() {
            let d = self.subsystems[s].dim();
            out[slot] = index % d;
            index /= d;
        }
        out
    }

    /// Product-basis index in `group` of the digits taken from a digit map
    /// indexed by subsystem.
    fn index_from(&self, group: &[usize], by_subsystem: &[usize]) -> usize {
        group.iter().fold(0, |acc, &s| {
            acc * self.subsystems[s].dim() + by_subsystem[s]
        })
    }

    /// Labels of a product-basis index in `group`.
    pub fn basis_labels(&self, group: &[usize], index: usize) -> Vec<&str> {
        self.digits(group, index)
            .into_iter()
            .zip(group)
            .map(|(d, &s)| self.subsystems[s].labels[d].as_str())
            .collect()
    }

    fn check_group(&self, group: &[usize]) -> Result<(), LinearError> {
        if group.windows(2).any(|w| w[0] >= w[1])
            || group.iter().any(|&s| s >= self.subsystems.len())
        {
            return Err(LinearError::LayoutMismatch(format!(
                "invalid subsystem group {group:?}"
            )));
        }
        Ok(())
    }

    fn group_name(&self, group: &[usize]) -> String {
        group
            .iter()
            .map(|&s| self.subsystems[s].name.as_str())
            .collect::<Vec<_>>()
            .join("⊗")
    }
}

fn same_layout(a: &Arc<SpaceLayout>, b: &Arc<SpaceLayout>) -> Result<(), LinearError> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(LinearError::LayoutMismatch("operands use different layouts".into()))
    }
}

fn union(a: &[usize], b: &[usize]) -> Result<Vec<usize>, LinearError> {
    if a.iter().any(|s| b.contains(s)) {
        return Err(LinearError::LayoutMismatch(
            "tensor factors share a subsystem".into(),
        ));
    }
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    Ok(out)
}

/// A vector on a group of subsystems.
#[derive(Clone, PartialEq, Eq)]
pub struct Ket {
    layout: Arc<SpaceLayout>,
    group: Vec<usize>,
    coeffs: Vec<ExactScalar>,
}

impl Ket {
    pub fn new(
        layout: Arc<SpaceLayout>,
        group: Vec<usize>,
        coeffs: Vec<ExactScalar>,
    ) -> Result<Self, LinearError> {
        layout.check_group(&group)?;
        let dim = layout.group_dim(&group);
        if coeffs.len() != dim {
            return Err(LinearError::LayoutMismatch(format!(
                "{} coefficients for dimension {dim}",
                coeffs.len()
            )));
        }
        Ok(Ket {
            layout,
            group,
            coeffs,
        })
    }

    /// A ket on the whole layout.
    pub fn on_layout(layout: Arc<SpaceLayout>, coeffs: Vec<ExactScalar>) -> Result<Self, LinearError> {
        let group = layout.all();
        Ket::new(layout, group, coeffs)
    }

    pub fn zero(layout: Arc<SpaceLayout>, group: Vec<usize>) -> Result<Self, LinearError> {
        let dim = layout.group_dim(&group);
        Ket::new(layout, group, vec![ExactScalar::zero(); dim])
    }

    /// Basis ket `|label⟩` of a single subsystem.
    pub fn basis(layout: Arc<SpaceLayout>, subsystem: usize, label: &str) -> Result<Self, LinearError> {
        let sub = layout.subsystems().get(subsystem).ok_or_else(|| {
            LinearError::LayoutMismatch(format!("no subsystem {subsystem}"))
        })?;
        let pos = sub.labels.iter().position(|l| l == label).ok_or_else(|| {
            LinearError::LayoutMismatch(format!("`{label}` is not a basis label of `{}`", sub.name))
        })?;
        let mut coeffs = vec![ExactScalar::zero(); sub.dim()];
        coeffs[pos] = ExactScalar::one();
        Ket::new(layout, vec![subsystem], coeffs)
    }

    pub fn layout(&self) -> &Arc<SpaceLayout> {
        &self.layout
    }

    pub fn group(&self) -> &[usize] {
        &self.group
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn scale(&self, s: &ExactScalar) -> Ket {
        Ket {
            coeffs: self.coeffs.iter().map(|c| s * c).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Ket) -> Result<Ket, LinearError> {
        self.check_same_space(other)?;
        Ok(Ket {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            ..self.clone()
        })
    }

    fn check_same_space(&self, other: &Ket) -> Result<(), LinearError> {
        same_layout(&self.layout, &other.layout)?;
        if self.group != other.group {
            return Err(LinearError::LayoutMismatch(format!(
                "kets on {} and {}",
                self.layout.group_name(&self.group),
                self.layout.group_name(&other.group)
            )));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(ExactScalar::is_zero)
    }

    pub fn norm_squared(&self) -> ExactScalar {
        self.coeffs.iter().map(ExactScalar::square).sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.norm_squared().is_one()
    }

    pub fn check_normalized(&self) -> Result<(), LinearError> {
        let n = self.norm_squared();
        if n.is_one() {
            Ok(())
        } else {
            Err(LinearError::NotNormalized(n.to_string()))
        }
    }
}

impl fmt::Debug for Ket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let labels = self.layout.basis_labels(&self.group, i).join(",");
            write!(f, "({c})|{labels}⟩")?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Kronecker product in layout order. The operands must sit on disjoint
/// subsystem groups of one layout; the result sits on their union.
pub fn tensor(u: &Ket, v: &Ket) -> Result<Ket, LinearError> {
    same_layout(&u.layout, &v.layout)?;
    let group = union(&u.group, &v.group)?;
    let layout = &u.layout;
    let dim = layout.group_dim(&group);
    let mut by_subsystem = vec![0; layout.subsystems().len()];
    let coeffs = (0..dim)
        .map(|i| {
            for (d, &s) in layout.digits(&group, i).into_iter().zip(&group) {
                by_subsystem[s] = d;
            }
            let iu = layout.index_from(&u.group, &by_subsystem);
            let iv = layout.index_from(&v.group, &by_subsystem);
            &u.coeffs[iu] * &v.coeffs[iv]
        })
        .collect();
    Ket::new(u.layout.clone(), group, coeffs)
}

/// Symmetric bilinear form ⟨u|v⟩ (all scalars are real).
pub fn inner(u: &Ket, v: &Ket) -> Result<ExactScalar, LinearError> {
    u.check_same_space(v)?;
    Ok(u.coeffs.iter().zip(&v.coeffs).map(|(a, b)| a * b).sum())
}

/// `|v⟩⟨v|` for a normalized `v`.
pub fn projector(v: &Ket) -> Result<LinearOperator, LinearError> {
    v.check_normalized()?;
    Ok(outer(v, v))
}

fn outer(u: &Ket, v: &Ket) -> LinearOperator {
    let matrix = u
        .coeffs
        .iter()
        .flat_map(|a| v.coeffs.iter().map(move |b| a * b))
        .collect();
    LinearOperator {
        layout: u.layout.clone(),
        group: u.group.clone(),
        dim: u.dim(),
        matrix,
    }
}

/// Applies `op` to `v`. An operator on a subgroup of `v`'s subsystems is
/// extended by the identity first.
pub fn apply(op: &LinearOperator, v: &Ket) -> Result<Ket, LinearError> {
    same_layout(&op.layout, &v.layout)?;
    let op = if op.group == v.group {
        op.clone()
    } else {
        op.extend_to(&v.group)?
    };
    let n = op.dim;
    let coeffs = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| op.entry(i, j) * &v.coeffs[j])
                .sum()
        })
        .collect();
    Ket::new(v.layout.clone(), v.group.clone(), coeffs)
}

/// Coefficients `⟨b_i|v⟩` of `v` in an orthonormal basis.
pub fn expand_in_basis(v: &Ket, basis: &[Ket]) -> Result<Vec<ExactScalar>, LinearError> {
    for b in basis {
        v.check_same_space(b)?;
    }
    check_orthonormal(basis)?;
    if basis.len() != v.dim() {
        return Err(LinearError::IncompleteBasis {
            expected: v.dim(),
            found: basis.len(),
        });
    }
    basis.iter().map(|b| inner(b, v)).collect()
}

/// Exact Gram-matrix check.
pub fn check_orthonormal(vectors: &[Ket]) -> Result<(), LinearError> {
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate().skip(i) {
            let g = inner(a, b)?;
            let ok = if i == j { g.is_one() } else { g.is_zero() };
            if !ok {
                return Err(LinearError::NotOrthonormal(format!(
                    "⟨b{i}|b{j}⟩ = {g}"
                )));
            }
        }
    }
    Ok(())
}

/// Dense square operator on a group of subsystems, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearOperator {
    layout: Arc<SpaceLayout>,
    group: Vec<usize>,
    dim: usize,
    matrix: Vec<ExactScalar>,
}

impl LinearOperator {
    pub fn from_rows(
        layout: Arc<SpaceLayout>,
        group: Vec<usize>,
        rows: Vec<Vec<ExactScalar>>,
    ) -> Result<Self, LinearError> {
        layout.check_group(&group)?;
        let dim = layout.group_dim(&group);
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(LinearError::LayoutMismatch(format!(
                "matrix shape does not match dimension {dim}"
            )));
        }
        Ok(LinearOperator {
            layout,
            group,
            dim,
            matrix: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zero(layout: Arc<SpaceLayout>, group: Vec<usize>) -> Result<Self, LinearError> {
        layout.check_group(&group)?;
        let dim = layout.group_dim(&group);
        Ok(LinearOperator {
            layout,
            group,
            dim,
            matrix: vec![ExactScalar::zero(); dim * dim],
        })
    }

    pub fn identity(layout: Arc<SpaceLayout>, group: Vec<usize>) -> Result<Self, LinearError> {
        let mut op = Self::zero(layout, group)?;
        for i in 0..op.dim {
            op.matrix[i * op.dim + i] = ExactScalar::one();
        }
        Ok(op)
    }

    pub fn layout(&self) -> &Arc<SpaceLayout> {
        &self.layout
    }

    pub fn group(&self) -> &[usize] {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> &ExactScalar {
        &self.matrix[row * self.dim + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[ExactScalar]> {
        self.matrix.chunks(self.dim)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(ExactScalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.entry(i, j) == self.entry(j, i)))
    }

    pub fn is_projector(&self) -> bool {
        self.is_symmetric() && self.compose(self).map(|sq| &sq == self).unwrap_or(false)
    }

    pub fn scale(&self, s: &ExactScalar) -> LinearOperator {
        LinearOperator {
            matrix: self.matrix.iter().map(|x| s * x).collect(),
            ..self.clone()
        }
    }

    fn align(&self, other: &LinearOperator) -> Result<(LinearOperator, LinearOperator), LinearError> {
        same_layout(&self.layout, &other.layout)?;
        if self.group == other.group {
            return Ok((self.clone(), other.clone()));
        }
        let mut group: Vec<usize> = self.group.iter().chain(&other.group).copied().collect();
        group.sort_unstable();
        group.dedup();
        Ok((self.extend_to(&group)?, other.extend_to(&group)?))
    }

    pub fn add(&self, other: &LinearOperator) -> Result<LinearOperator, LinearError> {
        let (a, b) = self.align(other)?;
        Ok(LinearOperator {
            matrix: a.matrix.iter().zip(&b.matrix).map(|(x, y)| x + y).collect(),
            ..a
        })
    }

    pub fn sub(&self, other: &LinearOperator) -> Result<LinearOperator, LinearError> {
        let (a, b) = self.align(other)?;
        Ok(LinearOperator {
            matrix: a.matrix.iter().zip(&b.matrix).map(|(x, y)| x - y).collect(),
            ..a
        })
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &LinearOperator) -> Result<LinearOperator, LinearError> {
        let (a, b) = self.align(other)?;
        let n = a.dim;
        let mut matrix = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                matrix.push((0..n).map(|k| a.entry(i, k) * b.entry(k, j)).sum());
            }
        }
        Ok(LinearOperator { matrix, ..a })
    }

    /// Extends the operator by the identity on the subsystems of `group`
    /// not already covered.
    pub fn extend_to(&self, group: &[usize]) -> Result<LinearOperator, LinearError> {
        self.layout.check_group(group)?;
        if !self.group.iter().all(|s| group.contains(s)) {
            return Err(LinearError::LayoutMismatch(format!(
                "cannot extend an operator on {} to {}",
                self.layout.group_name(&self.group),
                self.layout.group_name(group)
            )));
        }
        let layout = &self.layout;
        let rest: Vec<usize> = group.iter().copied().filter(|s| !self.group.contains(s)).collect();
        let dim = layout.group_dim(group);
        let mut rows = vec![0; layout.subsystems().len()];
        let mut cols = vec![0; layout.subsystems().len()];
        let mut matrix = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for (d, &s) in layout.digits(group, i).into_iter().zip(group) {
                rows[s] = d;
            }
            for j in 0..dim {
                for (d, &s) in layout.digits(group, j).into_iter().zip(group) {
                    cols[s] = d;
                }
                let value = if rest.iter().all(|&s| rows[s] == cols[s]) {
                    self.entry(
                        layout.index_from(&self.group, &rows),
                        layout.index_from(&self.group, &cols),
                    )
                    .clone()
                } else {
                    ExactScalar::zero()
                };
                matrix.push(value);
            }
        }
        Ok(LinearOperator {
            layout: self.layout.clone(),
            group: group.to_vec(),
            dim,
            matrix,
        })
    }

    /// The operator on the whole layout.
    pub fn lift(&self) -> LinearOperator {
        self.extend_to(&self.layout.all())
            .expect("every group is contained in the full layout")
    }
}

impl fmt::Debug for LinearOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LinearOperator on {} [", self.layout.group_name(&self.group))?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "  {}", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Operator Kronecker product, analogous to [`tensor`].
pub fn tensor_operators(a: &LinearOperator, b: &LinearOperator) -> Result<LinearOperator, LinearError> {
    same_layout(&a.layout, &b.layout)?;
    let group = union(&a.group, &b.group)?;
    let ea = a.extend_to(&group)?;
    let eb = b.extend_to(&group)?;
    ea.compose(&eb)
}

/// `O1·O2 − O2·O1`.
pub fn commutator(a: &LinearOperator, b: &LinearOperator) -> Result<LinearOperator, LinearError> {
    a.compose(b)?.sub(&b.compose(a)?)
}

pub fn commute(a: &LinearOperator, b: &LinearOperator) -> Result<bool, LinearError> {
    Ok(commutator(a, b)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::sqrt_rational;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn layout() -> Arc<SpaceLayout> {
        Arc::new(
            SpaceLayout::new(vec![
                Subsystem {
                    name: "L1".into(),
                    labels: vec!["H".into(), "T".into()],
                },
                Subsystem {
                    name: "L2".into(),
                    labels: vec!["up".into(), "down".into()],
                },
            ])
            .unwrap(),
        )
    }

    fn root(n: i64, d: i64) -> ExactScalar {
        sqrt_rational(&BigRational::new(BigInt::from(n), BigInt::from(d))).unwrap()
    }

    fn psi(l: &Arc<SpaceLayout>) -> Ket {
        let h = Ket::basis(l.clone(), 0, "H").unwrap();
        let t = Ket::basis(l.clone(), 0, "T").unwrap();
        let up = Ket::basis(l.clone(), 1, "up").unwrap();
        let down = Ket::basis(l.clone(), 1, "down").unwrap();
        let right = up.add(&down).unwrap().scale(&root(1, 2));
        tensor(&h, &down)
            .unwrap()
            .scale(&root(1, 3))
            .add(&tensor(&t, &right).unwrap().scale(&root(2, 3)))
            .unwrap()
    }

    #[test]
    fn basis_tensor_is_unit_vector() {
        let l = layout();
        let v = tensor(&Ket::basis(l.clone(), 0, "H").unwrap(), &Ket::basis(l.clone(), 1, "down").unwrap()).unwrap();
        let expected: Vec<ExactScalar> = [0, 1, 0, 0].iter().map(|&x| ExactScalar::from_integer(x)).collect();
        assert_eq!(v.coeffs(), expected.as_slice());
        assert_eq!(v.group(), &[0, 1]);
    }

    #[test]
    fn tensor_orders_by_layout() {
        let l = layout();
        let h = Ket::basis(l.clone(), 0, "H").unwrap();
        let down = Ket::basis(l.clone(), 1, "down").unwrap();
        assert_eq!(tensor(&h, &down).unwrap(), tensor(&down, &h).unwrap());
        assert!(tensor(&h, &h).is_err());
    }

    #[test]
    fn state_of_two_labs() {
        let l = layout();
        let third = root(1, 3);
        // (H↑, H↓, T↑, T↓)
        let expected = vec![ExactScalar::zero(), third.clone(), third.clone(), third];
        assert_eq!(psi(&l).coeffs(), expected.as_slice());
        assert!(psi(&l).is_normalized());
    }

    #[test]
    fn zero_tensor() {
        let l = layout();
        let z = Ket::zero(l.clone(), vec![0]).unwrap();
        let up = Ket::basis(l.clone(), 1, "up").unwrap();
        assert!(tensor(&z, &up).unwrap().is_zero());
    }

    #[test]
    fn projector_requires_normalization() {
        let l = layout();
        let v = Ket::basis(l.clone(), 0, "H").unwrap().scale(&ExactScalar::from_integer(2));
        assert!(matches!(projector(&v), Err(LinearError::NotNormalized(_))));
        let p = projector(&psi(&l)).unwrap();
        assert!(p.is_projector());
    }

    #[test]
    fn extension_matches_operator_tensor() {
        let l = layout();
        let h = Ket::basis(l.clone(), 0, "H").unwrap();
        let p = projector(&h).unwrap();
        let id2 = LinearOperator::identity(l.clone(), vec![1]).unwrap();
        assert_eq!(p.lift(), tensor_operators(&p, &id2).unwrap());
        assert_eq!(p.lift(), tensor_operators(&id2, &p).unwrap());
        let lifted = p.lift();
        assert_eq!(lifted.entry(0, 0), &ExactScalar::one());
        assert_eq!(lifted.entry(1, 1), &ExactScalar::one());
        assert!(lifted.entry(2, 2).is_zero());
    }

    #[test]
    fn apply_extends_operator() {
        let l = layout();
        let t = Ket::basis(l.clone(), 0, "T").unwrap();
        let p = projector(&t).unwrap();
        let out = apply(&p, &psi(&l)).unwrap();
        assert_eq!(inner(&out, &psi(&l)).unwrap(), ExactScalar::from_ratio(2, 3));
    }

    #[test]
    fn expansion_errors() {
        let l = layout();
        let h = Ket::basis(l.clone(), 0, "H").unwrap();
        let t = Ket::basis(l.clone(), 0, "T").unwrap();
        assert_eq!(
            expand_in_basis(&h, &[h.clone()]),
            Err(LinearError::IncompleteBasis { expected: 2, found: 1 })
        );
        assert!(matches!(
            expand_in_basis(&h, &[h.clone(), h.add(&t).unwrap()]),
            Err(LinearError::NotOrthonormal(_))
        ));
        assert_eq!(
            expand_in_basis(&h, &[t.clone(), h.clone()]).unwrap(),
            vec![ExactScalar::zero(), ExactScalar::one()]
        );
    }

    #[test]
    fn disjoint_factors_commute() {
        let l = layout();
        let x = projector(
            &Ket::basis(l.clone(), 0, "H")
                .unwrap()
                .add(&Ket::basis(l.clone(), 0, "T").unwrap().scale(&ExactScalar::from_integer(-1)))
                .unwrap()
                .scale(&root(1, 2)),
        )
        .unwrap();
        let b = projector(&Ket::basis(l.clone(), 1, "up").unwrap()).unwrap();
        assert!(commutator(&x.lift(), &b.lift()).unwrap().is_zero());
        assert!(commutator(&x, &b).unwrap().is_zero());
        assert!(commutator(&x, &x).unwrap().is_zero());
        let a = projector(&Ket::basis(l.clone(), 0, "H").unwrap()).unwrap();
        assert!(!commute(&x, &a).unwrap());
    }
}
