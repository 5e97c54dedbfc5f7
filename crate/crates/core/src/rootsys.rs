//! Finite crystallographic root systems built from Dynkin data, with Weyl
//! orbits, extended diagrams, wall crossings and the opposition involution.
//!
//! Vectors are written in the basis of simple roots; the inner product is the
//! Gram matrix of that basis. Node indices are 0-based here and correspond
//! to Bourbaki label `index + 1`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{self, ExactCosine, Rational, RationalMatrix, RationalVector};

/// Cap on the number of vectors a single Weyl orbit may contain.
pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootSystemError {
    #[error("invalid type {family}{rank}")]
    InvalidType { family: Family, rank: usize },
    #[error("Weyl orbit exceeds cap of {cap} vectors")]
    OrbitTooLarge { cap: usize },
    #[error("vectors are antipodal; the arc between them is not unique")]
    AntipodalPair,
    #[error("zero vector")]
    ZeroVector,
    #[error("vector has length {got}, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("node {0} out of range")]
    NodeOutOfRange(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        };
        write!(f, "{c}")
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            "E" | "e" => Ok(Family::E),
            "F" | "f" => Ok(Family::F),
            "G" | "g" => Ok(Family::G),
            other => Err(format!("unknown family {other:?}")),
        }
    }
}

/// An edge of a Coxeter diagram; `label` is the Coxeter number m (3, 4 or 6).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub label: u8,
}

/// A finite irreducible Dynkin type such as `E7`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiagramSpec {
    pub family: Family,
    pub rank: usize,
}

impl DiagramSpec {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootSystemError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(DiagramSpec { family, rank })
        } else {
            Err(RootSystemError::InvalidType { family, rank })
        }
    }

    /// Bonds in Bourbaki numbering (0-based).
    pub fn edges(&self) -> Vec<Bond> {
        let n = self.rank;
        let bond = |a: usize, b: usize, label: u8| Bond { a, b, label };
        let chain = |len: usize| (0..len.saturating_sub(1)).map(move |i| bond(i, i + 1, 3));
        match self.family {
            Family::A => chain(n).collect(),
            Family::B | Family::C => {
                let mut e: Vec<Bond> = chain(n - 1).collect();
                e.push(bond(n - 2, n - 1, 4));
                e
            }
            Family::D => {
                let mut e: Vec<Bond> = chain(n - 1).collect();
                e.push(bond(n - 3, n - 1, 3));
                e
            }
            Family::E => {
                let mut e = vec![bond(0, 2, 3), bond(1, 3, 3)];
                e.extend((2..n - 1).map(|i| bond(i, i + 1, 3)));
                e
            }
            Family::F => vec![bond(0, 1, 3), bond(1, 2, 4), bond(2, 3, 3)],
            Family::G => vec![bond(0, 1, 6)],
        }
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }

    /// Node indices whose simple roots are long in the standard realization.
    fn standard_long_nodes(&self) -> Vec<bool> {
        let n = self.rank;
        match self.family {
            Family::A | Family::D | Family::E => vec![true; n],
            Family::B => (0..n).map(|i| i + 1 < n).collect(),
            Family::C => (0..n).map(|i| i + 1 == n).collect(),
            Family::F => vec![true, true, false, false],
            Family::G => vec![false, true],
        }
    }
}

impl fmt::Display for DiagramSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for DiagramSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (fam, rank) = s.split_at(1.min(s.len()));
        let family: Family = fam.parse()?;
        let rank: usize = rank.parse().map_err(|_| format!("bad rank in {s:?}"))?;
        DiagramSpec::new(family, rank).map_err(|e| e.to_string())
    }
}

/// Which root lengths are assigned to the nodes of a non-simply-laced
/// diagram. `Dual` exchanges long and short (B_n dual is C_n, and so on).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Realization {
    Standard,
    Dual,
}

/// Bond from the affine node to a simple node in the extended diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AffineBond {
    Single,
    Double,
    Triple,
    /// Only for A1, where the highest root is the simple root itself.
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtendedDiagram {
    pub base: DiagramSpec,
    pub realization: Realization,
    pub highest_root: RationalVector,
    /// `(node, bond)` for every simple node not orthogonal to the highest root.
    pub affine_node_attachments: Vec<(usize, AffineBond)>,
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub spec: DiagramSpec,
    pub realization: Realization,
    /// Labels of the parent diagram's nodes when this is a parabolic
    /// subsystem; `0..rank` otherwise.
    pub parent_nodes: Vec<usize>,
    pub simple_roots: Vec<RationalVector>,
    pub roots: Vec<RationalVector>,
    pub gram: RationalMatrix,
    /// `cartan[i][j] = <alpha_i, alpha_j^vee>`.
    pub cartan: Vec<Vec<i64>>,
    pub fundamental_weights: Vec<RationalVector>,
    pub orbit_cap: usize,
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn unit(n: usize, i: usize) -> RationalVector {
    (0..n)
        .map(|j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// Gram matrix of the simple roots with long roots of squared length
/// `2 * ratio` and short roots of squared length 2 (ratio is 1, 2 or 3).
fn gram_for(spec: &DiagramSpec, realization: Realization) -> RationalMatrix {
    let n = spec.rank;
    let mut long = spec.standard_long_nodes();
    if realization == Realization::Dual && !spec.is_simply_laced() {
        long.iter_mut().for_each(|l| *l = !*l);
    }
    let ratio = match spec.family {
        Family::G => 3,
        Family::B | Family::C | Family::F => 2,
        _ => 1,
    };
    let norm: Vec<i64> = long
        .iter()
        .map(|&l| if l { 2 * ratio } else { 2 })
        .collect();
    let mut g = vec![vec![Rational::zero(); n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = int(norm[i]);
    }
    for bond in spec.edges() {
        // (a,b) = -|a||b| cos(pi/m)
        let shorter = norm[bond.a].min(norm[bond.b]);
        let value = match bond.label {
            3 => -shorter / 2,
            4 => -shorter,
            6 => -shorter * 3 / 2,
            _ => unreachable!(),
        };
        g[bond.a][bond.b] = int(value);
        g[bond.b][bond.a] = int(value);
    }
    g
}

fn cartan_from_gram(gram: &RationalMatrix) -> Vec<Vec<i64>> {
    let n = gram.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = int(2) * &gram[i][j] / &gram[j][j];
                    c.to_i64()
                        .expect("crystallographic Cartan entries are integers")
                })
                .collect()
        })
        .collect()
}

impl RootSystem {
    pub fn build(spec: DiagramSpec) -> Result<Self, RootSystemError> {
        Self::with_realization(spec, Realization::Standard)
    }

    pub fn with_realization(
        spec: DiagramSpec,
        realization: Realization,
    ) -> Result<Self, RootSystemError> {
        let spec = DiagramSpec::new(spec.family, spec.rank)?;
        let gram = gram_for(&spec, realization);
        Ok(Self::from_gram(
            spec,
            realization,
            (0..spec.rank).collect(),
            gram,
        ))
    }

    fn from_gram(
        spec: DiagramSpec,
        realization: Realization,
        parent_nodes: Vec<usize>,
        gram: RationalMatrix,
    ) -> Self {
        let n = gram.len();
        let cartan = cartan_from_gram(&gram);
        let simple_roots: Vec<RationalVector> = (0..n).map(|i| unit(n, i)).collect();
        // omega_i = sum_k c_ik alpha_k with sum_k c_ik <alpha_k, alpha_j^vee> = delta_ij,
        // so the coefficient matrix is the inverse of the Cartan matrix.
        let cartan_q: RationalMatrix = cartan
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect();
        let fundamental_weights = exact::solve(&transpose(&cartan_q), &exact::identity(n))
            .map(|m| transpose(&m))
            .expect("Cartan matrix of a finite type is invertible");
        let mut rs = RootSystem {
            spec,
            realization,
            parent_nodes,
            simple_roots,
            roots: Vec::new(),
            gram,
            cartan,
            fundamental_weights,
            orbit_cap: DEFAULT_ORBIT_CAP,
        };
        rs.roots = rs.close_roots();
        rs
    }

    /// Parabolic subsystem on the given nodes (a residue of the diagram).
    pub fn parabolic(&self, nodes: &[usize]) -> Result<RootSystem, RootSystemError> {
        if let Some(&bad) = nodes.iter().find(|&&i| i >= self.rank()) {
            return Err(RootSystemError::NodeOutOfRange(bad));
        }
        let gram: RationalMatrix = nodes
            .iter()
            .map(|&i| nodes.iter().map(|&j| self.gram[i][j].clone()).collect())
            .collect();
        let parent_nodes = nodes.iter().map(|&i| self.parent_nodes[i]).collect();
        let mut sub = Self::from_gram(self.spec, self.realization, parent_nodes, gram);
        sub.orbit_cap = self.orbit_cap;
        Ok(sub)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn with_orbit_cap(mut self, cap: usize) -> Self {
        self.orbit_cap = cap;
        self
    }

    pub fn inner(&self, u: &[Rational], v: &[Rational]) -> Rational {
        exact::bilinear(u, v, &self.gram).expect("dimension checked by caller")
    }

    pub fn norm2(&self, v: &[Rational]) -> Rational {
        self.inner(v, v)
    }

    pub fn cos_between(
        &self,
        u: &[Rational],
        v: &[Rational],
    ) -> Result<ExactCosine, RootSystemError> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        exact::cos_between(u, v, &self.gram).map_err(|_| RootSystemError::ZeroVector)
    }

    fn check_dim(&self, v: &[Rational]) -> Result<(), RootSystemError> {
        if v.len() != self.rank() {
            return Err(RootSystemError::Dimension {
                expected: self.rank(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `<v, alpha_i^vee> = 2 (v, alpha_i) / (alpha_i, alpha_i)`.
    pub fn coroot_pairing(&self, v: &[Rational], i: usize) -> Rational {
        let ip: Rational = self.gram[i]
            .iter()
            .zip(v)
            .filter(|(g, x)| !g.is_zero() && !x.is_zero())
            .map(|(g, x)| g * x)
            .sum();
        int(2) * ip / &self.gram[i][i]
    }

    pub fn reflect(&self, v: &[Rational], i: usize) -> RationalVector {
        let c = self.coroot_pairing(v, i);
        if c.is_zero() {
            return v.to_vec();
        }
        let mut out = v.to_vec();
        out[i] -= &c;
        out
    }

    /// Reflection in the hyperplane orthogonal to an arbitrary root `beta`.
    pub fn reflect_in(&self, v: &[Rational], beta: &[Rational]) -> RationalVector {
        let c = int(2) * self.inner(v, beta) / self.norm2(beta);
        v.iter().zip(beta).map(|(x, b)| x - &c * b).collect()
    }

    fn close_roots(&self) -> Vec<RationalVector> {
        let n = self.rank();
        let mut seen: HashSet<RationalVector> = HashSet::new();
        let mut order = Vec::new();
        let mut queue: VecDeque<RationalVector> = (0..n).map(|i| unit(n, i)).collect();
        while let Some(v) = queue.pop_front() {
            if !seen.insert(v.clone()) {
                continue;
            }
            for i in 0..n {
                let w = self.reflect(&v, i);
                if !seen.contains(&w) {
                    queue.push_back(w);
                }
            }
            order.push(v);
        }
        order.sort_by(|a, b| height(b).cmp(&height(a)).then_with(|| b.cmp(a)));
        order
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &RationalVector> {
        self.roots
            .iter()
            .filter(|r| r.iter().any(Rational::is_positive))
    }

    pub fn max_norm2(&self) -> Rational {
        (0..self.rank())
            .map(|i| self.gram[i][i].clone())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_long(&self, root: &[Rational]) -> bool {
        self.norm2(root) == self.max_norm2()
    }

    pub fn long_roots(&self) -> Vec<RationalVector> {
        let m = self.max_norm2();
        self.roots
            .iter()
            .filter(|r| self.norm2(r) == m)
            .cloned()
            .collect()
    }

    /// Simple node indices carrying long simple roots.
    pub fn long_nodes(&self) -> Vec<usize> {
        let m = self.max_norm2();
        (0..self.rank()).filter(|&i| self.gram[i][i] == m).collect()
    }

    pub fn is_irreducible(&self) -> bool {
        let n = self.rank();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for (j, g) in self.gram[i].iter().enumerate() {
                if !seen[j] && !g.is_zero() {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// The unique root dominating every other root coefficientwise.
    pub fn highest_root(&self) -> RationalVector {
        let top = self
            .roots
            .iter()
            .max_by(|a, b| height(a).cmp(&height(b)))
            .expect("nonempty root system")
            .clone();
        debug_assert!(self
            .roots
            .iter()
            .all(|r| r.iter().zip(&top).all(|(x, t)| x <= t)));
        top
    }

    pub fn extended_diagram(&self) -> ExtendedDiagram {
        let theta = self.highest_root();
        let neg: RationalVector = theta.iter().map(|x| -x).collect();
        let mut attachments = Vec::new();
        for i in 0..self.rank() {
            let c = exact::cos_between(&neg, &self.simple_roots[i], &self.gram).expect("nonzero");
            if c.sign == 0 {
                continue;
            }
            let c2 = &c.cos_squared;
            let bond = if *c2 == Rational::new(1, 4) {
                AffineBond::Single
            } else if *c2 == Rational::new(1, 2) {
                AffineBond::Double
            } else if *c2 == Rational::new(3, 4) {
                AffineBond::Triple
            } else {
                AffineBond::Infinite
            };
            attachments.push((i, bond));
        }
        ExtendedDiagram {
            base: self.spec,
            realization: self.realization,
            highest_root: theta,
            affine_node_attachments: attachments,
        }
    }

    /// Breadth-first closure of `{v}` under the simple reflections.
    pub fn weyl_orbit(&self, v: &[Rational]) -> Result<Vec<RationalVector>, RootSystemError> {
        self.check_dim(v)?;
        let n = self.rank();
        let mut seen: HashSet<RationalVector> = HashSet::new();
        let mut order = Vec::new();
        let start = v.to_vec();
        seen.insert(start.clone());
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for i in 0..n {
                let y = self.reflect(&x, i);
                if !seen.contains(&y) {
                    if seen.len() >= self.orbit_cap {
                        return Err(RootSystemError::OrbitTooLarge {
                            cap: self.orbit_cap,
                        });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
            order.push(x);
        }
        Ok(order)
    }

    /// Positive roots whose walls are crossed by the open arc from `u` to `v`.
    pub fn separating_walls(
        &self,
        u: &[Rational],
        v: &[Rational],
    ) -> Result<Vec<RationalVector>, RootSystemError> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        let c = self.cos_between(u, v)?;
        if c.sign == -1 && c.cos_squared == Rational::one() {
            return Err(RootSystemError::AntipodalPair);
        }
        Ok(self
            .positive_roots()
            .filter(|beta| {
                let a = self.inner(beta, u).signum();
                let b = self.inner(beta, v).signum();
                a * b == -1
            })
            .cloned()
            .collect())
    }

    /// The permutation `sigma` of simple nodes with `-w0(alpha_i) = alpha_sigma(i)`.
    ///
    /// `w0` is found by reflecting the strictly dominant vector `rho` (sum of
    /// fundamental weights) through walls until it is antidominant; the
    /// recorded word is a reduced expression of the longest element.
    pub fn opposition_involution(&self) -> Vec<usize> {
        let n = self.rank();
        let mut v: RationalVector = (0..n)
            .map(|j| self.fundamental_weights.iter().map(|w| w[j].clone()).sum())
            .collect();
        let mut word = Vec::new();
        while let Some(i) = (0..n).find(|&i| self.coroot_pairing(&v, i).is_positive()) {
            v = self.reflect(&v, i);
            word.push(i);
        }
        (0..n)
            .map(|j| {
                let mut a = self.simple_roots[j].clone();
                for &i in &word {
                    a = self.reflect(&a, i);
                }
                let neg: RationalVector = a.iter().map(|x| -x).collect();
                self.simple_roots
                    .iter()
                    .position(|s| *s == neg)
                    .expect("w0 maps simple roots to negative simple roots")
            })
            .collect()
    }

    /// Same permutation computed from orbits: the antidominant member of the
    /// orbit of `omega_j` is `w0(omega_j) = -omega_sigma(j)`.
    pub fn opposition_involution_by_orbits(&self) -> Result<Vec<usize>, RootSystemError> {
        let n = self.rank();
        (0..n)
            .map(|j| {
                let orbit = self.weyl_orbit(&self.fundamental_weights[j])?;
                let low = orbit
                    .into_iter()
                    .find(|x| (0..n).all(|i| !self.coroot_pairing(x, i).is_positive()))
                    .expect("every orbit has an antidominant member");
                let neg: RationalVector = low.iter().map(|x| -x).collect();
                Ok(self
                    .fundamental_weights
                    .iter()
                    .position(|w| *w == neg)
                    .expect("-w0 permutes fundamental weights"))
            })
            .collect()
    }

    /// Whether `sigma` maps bonds to bonds with equal labels.
    pub fn is_diagram_automorphism(&self, sigma: &[usize]) -> bool {
        let n = self.rank();
        sigma.len() == n
            && (0..n).all(|i| (0..n).all(|j| self.cartan[i][j] == self.cartan[sigma[i]][sigma[j]]))
    }
}

fn height(v: &[Rational]) -> Rational {
    v.iter().cloned().sum()
}

fn transpose(m: &RationalMatrix) -> RationalMatrix {
    let n = m.len();
    let k = m.first().map_or(0, Vec::len);
    (0..k)
        .map(|j| (0..n).map(|i| m[i][j].clone()).collect())
        .collect()
}

pub fn build_root_system(spec: DiagramSpec) -> Result<RootSystem, RootSystemError> {
    RootSystem::build(spec)
}

/// Number of roots of the given type.
pub fn classical_root_count(spec: &DiagramSpec) -> usize {
    let n = spec.rank;
    match spec.family {
        Family::A => n * (n + 1),
        Family::B | Family::C => 2 * n * n,
        Family::D => 2 * n * (n - 1),
        Family::E => match n {
            6 => 72,
            7 => 126,
            _ => 240,
        },
        Family::F => 48,
        Family::G => 12,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::NamedAngle;

    fn spec(f: Family, n: usize) -> DiagramSpec {
        DiagramSpec::new(f, n).unwrap()
    }

    fn rs(f: Family, n: usize) -> RootSystem {
        RootSystem::build(spec(f, n)).unwrap()
    }

    fn v(xs: &[i64]) -> RationalVector {
        xs.iter().map(|&x| Rational::from_integer(x)).collect()
    }

    #[test]
    fn invalid_types_rejected() {
        assert!(DiagramSpec::new(Family::E, 5).is_err());
        assert!(DiagramSpec::new(Family::F, 3).is_err());
        assert!(DiagramSpec::new(Family::G, 3).is_err());
        assert!(DiagramSpec::new(Family::D, 2).is_err());
        assert!(DiagramSpec::new(Family::A, 0).is_err());
        assert_eq!("E7".parse::<DiagramSpec>().unwrap(), spec(Family::E, 7));
    }

    #[test]
    fn root_counts() {
        assert_eq!(rs(Family::A, 2).roots.len(), 6);
        let g2 = rs(Family::G, 2);
        assert_eq!(g2.roots.len(), 12);
        assert_eq!(g2.long_roots().len(), 6);
        assert_eq!(rs(Family::E, 8).roots.len(), 240);
    }

    #[test]
    fn cartan_and_weights() {
        let b3 = rs(Family::B, 3);
        assert_eq!(
            b3.cartan,
            vec![vec![2, -1, 0], vec![-1, 2, -2], vec![0, -1, 2]]
        );
        for (i, w) in b3.fundamental_weights.iter().enumerate() {
            for j in 0..3 {
                let expect = if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                assert_eq!(b3.coroot_pairing(w, j), expect);
            }
        }
        let g2 = rs(Family::G, 2);
        assert_eq!(g2.cartan, vec![vec![2, -1], vec![-3, 2]]);
    }

    #[test]
    fn highest_roots() {
        assert_eq!(rs(Family::A, 2).highest_root(), v(&[1, 1]));
        // alpha_1 short, alpha_2 long
        assert_eq!(rs(Family::G, 2).highest_root(), v(&[3, 2]));
        // Bourbaki: E7 highest root 2 2 3 4 3 2 1, the 4 sits on the branch node
        assert_eq!(rs(Family::E, 7).highest_root(), v(&[2, 2, 3, 4, 3, 2, 1]));
    }

    #[test]
    fn extended_diagrams() {
        let e7 = rs(Family::E, 7).extended_diagram();
        assert_eq!(e7.affine_node_attachments, vec![(0, AffineBond::Single)]);
        let a2 = rs(Family::A, 2).extended_diagram();
        assert_eq!(
            a2.affine_node_attachments,
            vec![(0, AffineBond::Single), (1, AffineBond::Single)]
        );
        for n in 3..=8 {
            let b = rs(Family::B, n).extended_diagram();
            assert_eq!(
                b.affine_node_attachments,
                vec![(1, AffineBond::Single)],
                "B{n}"
            );
        }
        let c3 = rs(Family::C, 3).extended_diagram();
        assert_eq!(c3.affine_node_attachments, vec![(0, AffineBond::Double)]);
        let a1 = rs(Family::A, 1).extended_diagram();
        assert_eq!(a1.affine_node_attachments, vec![(0, AffineBond::Infinite)]);
    }

    #[test]
    fn orbits() {
        let e7 = rs(Family::E, 7);
        assert_eq!(e7.weyl_orbit(&v(&[0; 7])).unwrap(), vec![v(&[0; 7])]);
        assert_eq!(
            e7.weyl_orbit(&e7.fundamental_weights[0]).unwrap().len(),
            126
        );
        let e8 = rs(Family::E, 8);
        assert_eq!(
            e8.weyl_orbit(&e8.fundamental_weights[7]).unwrap().len(),
            240
        );
        let capped = rs(Family::E, 8).with_orbit_cap(100);
        assert_eq!(
            capped.weyl_orbit(&capped.fundamental_weights[7]),
            Err(RootSystemError::OrbitTooLarge { cap: 100 })
        );
    }

    #[test]
    fn walls() {
        let f4 = rs(Family::F, 4);
        let long = f4.long_roots();
        let u = &long[0];
        assert!(f4.separating_walls(u, u).unwrap().is_empty());
        let w = long
            .iter()
            .find(|w| f4.cos_between(u, w).unwrap().is_angle(NamedAngle::PiThird))
            .unwrap();
        let walls = f4.separating_walls(u, w).unwrap();
        assert_eq!(walls.len(), 1);
        assert_eq!(&f4.reflect_in(u, &walls[0]), w);
        let neg: RationalVector = u.iter().map(|x| -x).collect();
        assert_eq!(
            f4.separating_walls(u, &neg),
            Err(RootSystemError::AntipodalPair)
        );
        let orth = long
            .iter()
            .find(|w| f4.cos_between(u, w).unwrap().sign == 0)
            .unwrap();
        assert!(f4.separating_walls(u, orth).unwrap().len() > 1);
    }

    #[test]
    fn opposition() {
        assert_eq!(rs(Family::D, 4).opposition_involution(), vec![0, 1, 2, 3]);
        assert_eq!(
            rs(Family::D, 5).opposition_involution(),
            vec![0, 1, 2, 4, 3]
        );
        assert_eq!(rs(Family::A, 2).opposition_involution(), vec![1, 0]);
        assert_eq!(
            rs(Family::E, 6).opposition_involution(),
            vec![5, 1, 4, 3, 2, 0]
        );
    }

    #[test]
    fn parabolic_subsystem() {
        let e7 = rs(Family::E, 7);
        // dropping node 7 (index 6) leaves E6
        let e6 = e7.parabolic(&[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(e6.roots.len(), 72);
        assert_eq!(e6.parent_nodes, vec![0, 1, 2, 3, 4, 5]);
        assert!(e7.parabolic(&[9]).is_err());
        assert!(!e7.parabolic(&[0, 6]).unwrap().is_irreducible());
    }
}
