//! Kernel lattice `Gamma`, coroot lattice `Lambda`, its saturation, the
//! fundamental groups they cut out, obstruction classes and topological
//! types.
//!
//! `Gamma` is `Z^d` in Cartan coordinates (for `SL` the trace-zero
//! sublattice, with basis `e_i - e_{i+1}`). Quotients are read off the Smith
//! normal form of the coroot generators written in a basis of `Gamma`.

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::linalg::{self, to_q, Matrix};
use crate::parabolic::{check_family, ParabolicIndex};
use crate::rootsys::{CartanVector, GroupFamily, Kind, RootSystem};
use crate::{Error, Result, Q};

/// A lattice given by a basis of integer vectors (rows).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerLattice {
    pub ambient_dim: usize,
    pub basis: Vec<Vec<i64>>,
}

impl IntegerLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        let rows: Vec<Vec<Q>> = self.basis.iter().map(|b| to_q(b)).collect();
        linalg::solve_combination(&rows, &to_q(v))
            .is_some_and(|c| c.iter().all(|q| q.is_integer()))
    }

    /// Index `[self : sub]` when `sub` has full rank in `self`.
    pub fn index_of(&self, sub: &IntegerLattice) -> Option<u64> {
        if sub.rank() != self.rank() || !sub.basis.iter().all(|b| self.contains(b)) {
            return None;
        }
        let rows: Vec<Vec<Q>> = self.basis.iter().map(|b| to_q(b)).collect();
        let coords: Vec<Vec<i128>> = sub
            .basis
            .iter()
            .map(|b| {
                linalg::solve_combination(&rows, &to_q(b))
                    .expect("member")
                    .iter()
                    .map(|q| q.to_integer() as i128)
                    .collect()
            })
            .collect();
        let snf = smith_normal_form(&coords, self.rank());
        Some(snf.diagonal.iter().map(|&d| d as u64).product())
    }
}

/// Finitely generated abelian group `Z^free_rank + sum Z/d_i` with
/// `d_i | d_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        FinAbGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn torsion_order(&self) -> i64 {
        self.torsion.iter().product()
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            k => parts.push(format!("Z^{k}")),
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" x "))
        }
    }
}

/// `pi1([G,G])`, `pi1(G)`, `pi1(G_ab)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FundamentalGroups {
    pub derived: FinAbGroup,
    pub full: FinAbGroup,
    pub abelian: FinAbGroup,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smith {
    /// Nonzero invariant factors, positive and dividing each other.
    pub diagonal: Vec<i128>,
    /// Column transform `V` with `U M V = D`.
    pub v: Vec<Vec<i128>>,
    /// `V^{-1}`.
    pub v_inv: Vec<Vec<i128>>,
}

/// Smith normal form of an integer matrix with `cols` columns, tracking the
/// column transform and its inverse.
pub fn smith_normal_form(m: &[Vec<i128>], cols: usize) -> Smith {
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let rows = a.len();
    let mut v = identity(cols);
    let mut v_inv = identity(cols);
    let mut diagonal = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero magnitude in the remaining block.
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs())
        else {
            break;
        };
        a.swap(t, pi);
        swap_cols(&mut a, &mut v, &mut v_inv, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t].div_euclid(a[t][t]);
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j].div_euclid(a[t][t]);
                if q != 0 {
                    add_col(&mut a, &mut v, &mut v_inv, j, t, -q);
                }
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // Divisibility of the rest of the block by the pivot.
                let bad = (t + 1..rows)
                    .find(|&i| (t + 1..cols).any(|j| a[i][j] % a[t][t] != 0));
                match bad {
                    None => break,
                    Some(i) => {
                        for j in t..cols {
                            let x = a[i][j];
                            a[t][j] += x;
                        }
                    }
                }
            }
            // Move the smallest nonzero entry of row/column t to the pivot.
            let best_row = (t..rows).filter(|&i| a[i][t] != 0).min_by_key(|&i| a[i][t].abs());
            let best_col = (t..cols).filter(|&j| a[t][j] != 0).min_by_key(|&j| a[t][j].abs());
            match (best_row, best_col) {
                (Some(i), Some(j)) => {
                    if a[i][t].abs() < a[t][j].abs() {
                        a.swap(t, i);
                    } else {
                        swap_cols(&mut a, &mut v, &mut v_inv, t, j);
                    }
                }
                (Some(i), None) => a.swap(t, i),
                (None, Some(j)) => swap_cols(&mut a, &mut v, &mut v_inv, t, j),
                (None, None) => unreachable!("pivot row and column cannot both vanish"),
            }
        }
        if a[t][t] < 0 {
            for j in t..cols {
                a[t][j] = -a[t][j];
            }
        }
        diagonal.push(a[t][t]);
        t += 1;
    }
    Smith { diagonal, v, v_inv }
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn swap_cols(a: &mut [Vec<i128>], v: &mut [Vec<i128>], v_inv: &mut [Vec<i128>], i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut().chain(v.iter_mut()) {
        row.swap(i, j);
    }
    v_inv.swap(i, j);
}

/// Column `dst += c * column src`, with `V^{-1}` updated by the inverse row op.
fn add_col(a: &mut [Vec<i128>], v: &mut [Vec<i128>], v_inv: &mut [Vec<i128>], dst: usize, src: usize, c: i128) {
    for row in a.iter_mut().chain(v.iter_mut()) {
        row[dst] += c * row[src];
    }
    // E = I + c e_src e_dst^T, E^{-1} = I - c e_src e_dst^T: row src -= c row dst.
    let n = v_inv.len();
    for j in 0..n {
        let x = v_inv[dst][j];
        v_inv[src][j] -= c * x;
    }
}

/// Row-style Hermite normal form with positive pivots and reduced entries
/// above them; zero rows dropped.
pub fn hermite_normal_form(m: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        loop {
            let Some(p) = (r..a.len()).filter(|&i| a[i][c] != 0).min_by_key(|&i| a[i][c].abs()) else {
                break;
            };
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..a.len() {
                let q = a[i][c].div_euclid(a[r][c]);
                if q != 0 {
                    for j in 0..cols {
                        a[i][j] -= q * a[r][j];
                    }
                }
                if a[i][c] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a.get(r).is_none_or(|row| row[c] == 0) {
            continue;
        }
        if a[r][c] < 0 {
            for x in a[r].iter_mut() {
                *x = -*x;
            }
        }
        for i in 0..r {
            let q = a[i][c].div_euclid(a[r][c]);
            if q != 0 {
                for j in 0..cols {
                    a[i][j] -= q * a[r][j];
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// The tower `Gamma >= saturation(Lambda) >= Lambda` of a group or of a
/// Levi factor `L_I`.
#[derive(Debug, Clone)]
pub struct LatticeTower {
    pub family: GroupFamily,
    pub levi: Option<ParabolicIndex>,
    pub gamma: IntegerLattice,
    pub lambda: IntegerLattice,
    pub lambda_sat: IntegerLattice,
    /// Per-block denominators of the central averaging that produces `Psi`.
    pub psi_denominators: Vec<i64>,
    smith: Smith,
    /// Canonical (Hermite) functionals on `Gamma` coordinates giving the free
    /// part of a class.
    free_functionals: Vec<Vec<i128>>,
    central_projector: Matrix,
}

impl LatticeTower {
    pub fn gamma_dim(&self) -> usize {
        self.gamma.rank()
    }

    /// Coordinates of an ambient vector in the basis of `Gamma`.
    pub fn gamma_coords(&self, a: &CartanVector) -> Result<Vec<i64>> {
        self.family.check_dim(a.len())?;
        let ints = a.to_ints().ok_or_else(|| Error::NotInKernelLattice(a.to_string()))?;
        gamma_coords(self.family, &ints).ok_or_else(|| Error::NotInKernelLattice(a.to_string()))
    }

    pub fn fundamental_groups(&self) -> FundamentalGroups {
        let torsion: Vec<i64> = self.smith.diagonal.iter().filter(|&&d| d > 1).map(|&d| d as i64).collect();
        let free = self.gamma_dim() - self.smith.diagonal.len();
        FundamentalGroups {
            derived: FinAbGroup { free_rank: 0, torsion: torsion.clone() },
            full: FinAbGroup { free_rank: free, torsion },
            abelian: FinAbGroup { free_rank: free, torsion: Vec::new() },
        }
    }

    /// Class of `a` in `Gamma / Lambda`.
    pub fn class_of(&self, a: &CartanVector) -> Result<ObstructionClass> {
        let x: Vec<i128> = self.gamma_coords(a)?.into_iter().map(i128::from).collect();
        let n = self.gamma_dim();
        let mut torsion = Vec::new();
        for (i, &d) in self.smith.diagonal.iter().enumerate() {
            if d > 1 {
                let y: i128 = (0..n).map(|k| x[k] * self.smith.v[k][i]).sum();
                torsion.push(y.rem_euclid(d) as i64);
            }
        }
        let free = self
            .free_functionals
            .iter()
            .map(|f| f.iter().zip(&x).map(|(a, b)| a * b).sum::<i128>() as i64)
            .collect();
        Ok(ObstructionClass { torsion, free })
    }

    /// Central projection of `a` (orthogonal to the roots of the group or
    /// Levi factor).
    pub fn central_part(&self, a: &CartanVector) -> CartanVector {
        CartanVector(linalg::apply(&self.central_projector, a.coords()))
    }

    /// A basis of `Psi`, the image of `Gamma` under central averaging.
    pub fn psi_basis(&self) -> Vec<CartanVector> {
        let images: Vec<Vec<Q>> = self
            .gamma
            .basis
            .iter()
            .map(|b| linalg::apply(&self.central_projector, &to_q(b)))
            .collect();
        let scale = images.iter().flatten().fold(1i64, |acc, q| acc.lcm(q.denom()));
        let scaled: Vec<Vec<i128>> = images
            .iter()
            .map(|v| v.iter().map(|q| (q * scale).to_integer() as i128).collect())
            .collect();
        hermite_normal_form(&scaled)
            .into_iter()
            .map(|row| CartanVector(row.into_iter().map(|x| Q::new(x as i64, scale)).collect()))
            .collect()
    }
}

/// Class in `pi1 = Gamma / Lambda`: residues modulo each invariant factor
/// `>= 2`, then free coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ObstructionClass {
    pub torsion: Vec<i64>,
    pub free: Vec<i64>,
}

impl ObstructionClass {
    pub fn is_trivial(&self) -> bool {
        self.torsion.iter().chain(&self.free).all(|&x| x == 0)
    }
}

impl fmt::Display for ObstructionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.torsion.iter().chain(&self.free).map(i64::to_string).collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            write!(f, "({})", parts.join(","))
        }
    }
}

fn gamma_basis(family: GroupFamily) -> Vec<Vec<i64>> {
    let d = family.cartan_dim();
    let unit = |i: usize| (0..d).map(|j| i64::from(i == j)).collect::<Vec<_>>();
    match family.kind() {
        Kind::SL => (0..d - 1)
            .map(|i| {
                let mut v = vec![0; d];
                v[i] = 1;
                v[i + 1] = -1;
                v
            })
            .collect(),
        _ => (0..d).map(unit).collect(),
    }
}

fn gamma_coords(family: GroupFamily, v: &[i64]) -> Option<Vec<i64>> {
    match family.kind() {
        Kind::SL => {
            if v.iter().sum::<i64>() != 0 {
                return None;
            }
            let mut acc = 0;
            Some(v[..v.len() - 1].iter().map(|x| {
                acc += x;
                acc
            }).collect())
        }
        _ => Some(v.to_vec()),
    }
}

fn build_tower(family: GroupFamily, levi: Option<ParabolicIndex>) -> Result<LatticeTower> {
    let rs = RootSystem::new(family)?;
    let roots = match &levi {
        Some(i) => {
            check_family(family, i.family())?;
            rs.levi_roots(i)
        }
        None => rs.roots(),
    };
    let gamma = IntegerLattice { ambient_dim: family.cartan_dim(), basis: gamma_basis(family) };
    let n = gamma.rank();
    let coroot_coords: Vec<Vec<i128>> = roots
        .iter()
        .map(|r| {
            let co = rs.coroot(r).expect("root");
            let ints = co.to_ints().expect("classical coroots are integral");
            gamma_coords(family, &ints)
                .expect("coroots lie in the kernel lattice")
                .into_iter()
                .map(i128::from)
                .collect()
        })
        .collect();
    let smith = smith_normal_form(&coroot_coords, n);
    let k = smith.diagonal.len();
    let to_ambient = |coords: &[i128]| -> Vec<i64> {
        let mut out = vec![0i64; gamma.ambient_dim];
        for (c, b) in coords.iter().zip(&gamma.basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += *c as i64 * x;
            }
        }
        out
    };
    let sat_rows: Vec<Vec<i128>> = smith.v_inv[..k].to_vec();
    let lambda_rows: Vec<Vec<i128>> = sat_rows
        .iter()
        .zip(&smith.diagonal)
        .map(|(row, &d)| row.iter().map(|x| x * d).collect())
        .collect();
    let lambda_sat = IntegerLattice {
        ambient_dim: gamma.ambient_dim,
        basis: hermite_normal_form(&sat_rows).iter().map(|r| to_ambient(r)).collect(),
    };
    let lambda = IntegerLattice {
        ambient_dim: gamma.ambient_dim,
        basis: hermite_normal_form(&lambda_rows).iter().map(|r| to_ambient(r)).collect(),
    };
    let free_cols: Vec<Vec<i128>> = (k..n).map(|i| (0..n).map(|row| smith.v[row][i]).collect()).collect();
    let free_functionals = hermite_normal_form(&free_cols);
    let root_q: Vec<Vec<Q>> = roots.iter().map(|r| to_q(&r.0)).collect();
    let mut span = root_q;
    if family.kind() == Kind::SL {
        // Lie(T) of SL is trace-zero: the center lives inside that hyperplane.
        span.push(vec![Q::from_integer(1); family.cartan_dim()]);
    }
    let central_projector = linalg::complement_projector(&span, family.cartan_dim());
    let psi_denominators = psi_denominators(&central_projector);
    Ok(LatticeTower {
        family,
        levi,
        gamma,
        lambda,
        lambda_sat,
        psi_denominators,
        smith,
        free_functionals,
        central_projector,
    })
}

/// Per connected block of the projector, the lcm of its entry denominators.
fn psi_denominators(p: &Matrix) -> Vec<i64> {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] || p[start].iter().all(Q::is_zero) {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let mut denom = 1i64;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !p[i][j].is_zero() {
                    denom = denom.lcm(p[i][j].denom());
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        out.push(denom);
    }
    out
}

pub fn lattice_tower(family: GroupFamily) -> Result<LatticeTower> {
    build_tower(family, None)
}

pub fn levi_lattice_tower(family: GroupFamily, index: &ParabolicIndex) -> Result<LatticeTower> {
    build_tower(family, Some(index.clone()))
}

pub fn fundamental_groups(family: GroupFamily) -> Result<FundamentalGroups> {
    Ok(lattice_tower(family)?.fundamental_groups())
}

pub fn levi_fundamental_groups(family: GroupFamily, index: &ParabolicIndex) -> Result<FundamentalGroups> {
    Ok(levi_lattice_tower(family, index)?.fundamental_groups())
}

pub fn obstruction_class(family: GroupFamily, a: &CartanVector) -> Result<ObstructionClass> {
    lattice_tower(family)?.class_of(a)
}

pub fn topological_type(family: GroupFamily, a: &CartanVector) -> Result<CartanVector> {
    let tower = lattice_tower(family)?;
    tower.gamma_coords(a)?;
    Ok(tower.central_part(a))
}

/// Topological type of the Levi reduction: per-block central averaging.
pub fn levi_topological_type(family: GroupFamily, index: &ParabolicIndex, a: &CartanVector) -> Result<CartanVector> {
    let tower = levi_lattice_tower(family, index)?;
    tower.gamma_coords(a)?;
    Ok(tower.central_part(a))
}
