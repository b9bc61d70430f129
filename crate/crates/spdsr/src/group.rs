//! The finite symmetry machinery behind eigen-decompositions: axis
//! permutations, even sign changes, eigenvalue partitions, and the
//! enumeration of all eigen-decomposition versions of a matrix with
//! distinct eigenvalues.
//!
//! A version of `X = U D U'` is any pair `(U I_s P', D_p)` obtained by
//! permuting the eigenvalues and flipping an even number of eigenvector
//! signs; there are `p! * 2^(p-1)` of them when the eigenvalues are
//! distinct.

use std::fmt;

use crate::error::{SrError, SrResult};
use crate::manifold::Frame;
use crate::matcore::{check_dim, DiagMat, Rotation};

/// A permutation of `{0, .., p-1}`, stored in one-line notation:
/// `map[i]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perm {
    map: Vec<usize>,
}

impl Perm {
    /// Validates that `map` is a bijection on `{0, .., p-1}` for
    /// `p = map.len()` equal to 2 or 3.
    pub fn new(map: Vec<usize>) -> SrResult<Self> {
        check_dim(map.len())?;
        let p = map.len();
        let mut seen = vec![false; p];
        for &v in &map {
            if v >= p || seen[v] {
                return Err(SrError::invalid(format!(
                    "not a permutation of 0..{p}: {map:?}"
                )));
            }
            seen[v] = true;
        }
        Ok(Perm { map })
    }

    /// The identity permutation.
    pub fn identity(p: usize) -> Self {
        assert!(p == 2 || p == 3);
        Perm {
            map: (0..p).collect(),
        }
    }

    /// All permutations of the given dimension in lexicographic order of
    /// their one-line notation.
    pub fn all(p: usize) -> Vec<Perm> {
        assert!(p == 2 || p == 3);
        let maps: &[&[usize]] = match p {
            2 => &[&[0, 1], &[1, 0]],
            _ => &[
                &[0, 1, 2],
                &[0, 2, 1],
                &[1, 0, 2],
                &[1, 2, 0],
                &[2, 0, 1],
                &[2, 1, 0],
            ],
        };
        maps.iter().map(|m| Perm { map: m.to_vec() }).collect()
    }

    pub fn p(&self) -> usize {
        self.map.len()
    }

    /// Image of index `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// The inverse permutation.
    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Perm { map: inv }
    }

    /// Parity: `true` for an even permutation.
    pub fn is_even(&self) -> bool {
        let mut inversions = 0;
        for i in 0..self.map.len() {
            for j in i + 1..self.map.len() {
                if self.map[i] > self.map[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 0
    }
}

/// The rotation representing a permutation: ones at `(map[i], i)`, with
/// the first row negated when the plain permutation matrix has
/// determinant -1, so the result is always in SO(p).
pub fn perm_matrix(perm: &Perm) -> Rotation {
    let p = perm.p();
    let sign = if perm.is_even() { 1.0 } else { -1.0 };
    let mut m = nalgebra::DMatrix::<f64>::zeros(p, p);
    for i in 0..p {
        let row = perm.apply(i);
        m[(row, i)] = if row == 0 { sign } else { 1.0 };
    }
    Rotation::new_unchecked(m)
}

impl DiagMat {
    /// The conjugation `P D P'` by a permutation matrix: entry `j` of the
    /// result is entry `inverse(j)` of `self`.
    pub fn permuted(&self, perm: &Perm) -> DiagMat {
        assert_eq!(self.p(), perm.p(), "dimension mismatch");
        let inv = perm.inverse();
        let d = self.entries();
        DiagMat::new_unchecked((0..self.p()).map(|j| d[inv.apply(j)]).collect())
    }
}

/// A diagonal matrix of signs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignChange {
    signs: Vec<i8>,
}

impl SignChange {
    /// Validates that every entry is +1 or -1 and the length is 2 or 3.
    pub fn new(signs: Vec<i8>) -> SrResult<Self> {
        check_dim(signs.len())?;
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(SrError::invalid(format!(
                "sign change entries must be +1 or -1, got {signs:?}"
            )));
        }
        Ok(SignChange { signs })
    }

    pub fn p(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Whether the product of signs is +1.
    pub fn is_even(&self) -> bool {
        self.signs.iter().product::<i8>() == 1
    }
}

/// The diagonal matrix of a sign change.
pub fn sign_matrix(sigma: &SignChange) -> DiagMat {
    DiagMat::new_unchecked(sigma.signs().iter().map(|&s| f64::from(s)).collect())
}

/// All `2^(p-1)` even sign changes, in a fixed order: the trailing
/// `p - 1` signs count through a binary pattern and the leading sign
/// makes the product +1. The first element is all ones.
pub fn even_signs(p: usize) -> Vec<SignChange> {
    assert!(p == 2 || p == 3);
    let mut out = Vec::with_capacity(1 << (p - 1));
    for bits in 0..(1u32 << (p - 1)) {
        let mut signs = vec![1i8; p];
        for i in 0..p - 1 {
            if bits >> i & 1 == 1 {
                signs[i + 1] = -1;
            }
        }
        signs[0] = signs[1..].iter().product();
        out.push(SignChange { signs });
    }
    out
}

/// A partition of index set `{0, .., p-1}` into blocks of equal values.
/// Blocks are sorted by smallest member and each block is ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// True when every block has exactly one member.
    pub fn is_all_singletons(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// Sizes of the blocks, in block order.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{{")?;
            for (j, &idx) in block.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                // Reported one-based for humans.
                write!(f, "{}", idx + 1)?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// Groups diagonal entries into equality blocks. Two entries belong
/// together when their gap is at most `tol_eq * max(1, largest entry)`;
/// the relation is closed transitively, so a chain of small gaps merges
/// into one block.
pub fn partition_of(d: &DiagMat, tol_eq: f64) -> Partition {
    let p = d.p();
    let vals = d.entries();
    let scale = f64::max(1.0, vals.iter().cloned().fold(f64::MIN, f64::max));
    let thresh = tol_eq * scale;

    let mut parent: Vec<usize> = (0..p).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..p {
        for j in i + 1..p {
            if (vals[i] - vals[j]).abs() <= thresh {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }

    let roots: Vec<usize> = (0..p).map(|i| root(&mut parent, i)).collect();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..p {
        match blocks.iter_mut().find(|b| roots[b[0]] == roots[i]) {
            Some(block) => block.push(i),
            None => blocks.push(vec![i]),
        }
    }
    Partition { blocks }
}

/// All eigen-decomposition versions `(U I_s P', D_p)` of the matrix
/// `U D U'`, which requires the diagonal entries of `D` to be distinct
/// at tolerance `tol_eq`. The enumeration order is fixed: sign changes
/// outermost (as produced by [`even_signs`]), permutations innermost (as
/// produced by [`Perm::all`]), so the first version is `(U, D)` itself.
pub fn enumerate_versions(u: &Rotation, d: &DiagMat, tol_eq: f64) -> SrResult<Vec<Frame>> {
    if u.p() != d.p() {
        return Err(SrError::invalid("rotation and diagonal dimensions differ"));
    }
    if !d.is_positive() {
        return Err(SrError::invalid(
            "version enumeration needs positive diagonal entries",
        ));
    }
    let partition = partition_of(d, tol_eq);
    if !partition.is_all_singletons() {
        return Err(SrError::Multiplicity {
            partition,
            context: "only matrices with distinct eigenvalues have finitely many versions"
                .to_string(),
        });
    }

    let p = u.p();
    let mut out = Vec::with_capacity((1 << (p - 1)) * Perm::all(p).len());
    for sigma in even_signs(p) {
        let s = sign_matrix(&sigma).matrix();
        for perm in Perm::all(p) {
            let pm = perm_matrix(&perm);
            let rot = Rotation::new_unchecked(u.matrix() * &s * pm.matrix().transpose());
            out.push(Frame::new_unchecked(rot, d.permuted(&perm)));
        }
    }
    Ok(out)
}
