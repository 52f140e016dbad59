//! Infeasible primal-dual path-following solver (HKM direction with
//! Mehrotra predictor-corrector) for block-diagonal SDPs.
//!
//! Problems are held in the sparse interchange convention
//! `minimize c.x  s.t.  sum_i F_i x_i - F_0 >= 0`; the reported objectives
//! are for the maximization `offset - c.x`.

use std::collections::BTreeMap;

use log::debug;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::classical::{BoundResult, Method};
use crate::error::{Error, Result};
use crate::poly::to_f64;
use crate::sdp::model::SdpProblem;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverParams {
    pub max_iterations: usize,
    pub duality_gap_tolerance: f64,
    pub feasibility_tolerance: f64,
    pub step_fraction: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            max_iterations: 200,
            duality_gap_tolerance: 1e-8,
            feasibility_tolerance: 1e-8,
            step_fraction: 0.98,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.duality_gap_tolerance > 0.0 && self.feasibility_tolerance > 0.0) {
            return Err(Error::Domain("solver tolerances must be positive".into()));
        }
        if !(self.step_fraction > 0.0 && self.step_fraction < 1.0) {
            return Err(Error::Domain("step fraction must lie in (0, 1)".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Domain("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverStatus {
    Optimal,
    MaxIter,
    Infeasible,
    NumericalFailure,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverResult {
    /// Objective at the current `y`; a lower bound once the dual residual vanishes.
    pub primal_objective: f64,
    /// `offset + C.X`; an upper bound once the primal residual vanishes.
    pub dual_objective: f64,
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub status: SolverStatus,
    /// Values of the original variables.
    pub y: Vec<f64>,
}

/// One nonzero of a coefficient matrix; `var == 0` is the constant `F_0`.
/// Indices are zero-based here and one-based on disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SdpaEntry {
    pub var: usize,
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

/// Numeric block SDP in the interchange convention.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSdp {
    pub num_vars: usize,
    /// Negative sizes mark diagonal blocks.
    pub block_sizes: Vec<i64>,
    pub c: Vec<f64>,
    /// Upper-triangle entries (`row <= col`), sorted by `(var, block, row, col)`.
    pub entries: Vec<SdpaEntry>,
    pub offset: f64,
}

impl BlockSdp {
    /// Numeric form of an assembled problem: one PSD block per model block and
    /// a trailing diagonal block holding the linear inequalities.
    pub fn from_problem(p: &SdpProblem) -> Self {
        let mut entries = Vec::new();
        let mut block_sizes = Vec::new();
        for (bi, b) in p.blocks.iter().enumerate() {
            block_sizes.push(b.size as i64);
            for (&(r, c), v) in &b.constant.entries {
                entries.push(SdpaEntry { var: 0, block: bi, row: r, col: c, value: -to_f64(v) });
            }
            for (&j, mtx) in &b.coeffs {
                for (&(r, c), v) in &mtx.entries {
                    entries.push(SdpaEntry { var: j + 1, block: bi, row: r, col: c, value: to_f64(v) });
                }
            }
        }
        let lp = p.blocks.len();
        block_sizes.push(-(p.linear.len() as i64));
        for (r, lc) in p.linear.iter().enumerate() {
            if !num_traits::Zero::is_zero(&lc.constant) {
                entries.push(SdpaEntry { var: 0, block: lp, row: r, col: r, value: -to_f64(&lc.constant) });
            }
            for (j, v) in &lc.coeffs {
                entries.push(SdpaEntry { var: j + 1, block: lp, row: r, col: r, value: to_f64(v) });
            }
        }
        entries.retain(|e| e.value != 0.0);
        let mut sdp = BlockSdp {
            num_vars: p.num_vars(),
            block_sizes,
            c: p.objective.iter().map(|v| -to_f64(v)).collect(),
            entries,
            offset: to_f64(&p.objective_constant),
        };
        sdp.normalize();
        sdp
    }

    /// Sorts entries, folds the lower triangle into the upper one and merges duplicates.
    pub fn normalize(&mut self) {
        let mut map: BTreeMap<(usize, usize, usize, usize), f64> = BTreeMap::new();
        for e in &self.entries {
            let (r, c) = if e.row <= e.col { (e.row, e.col) } else { (e.col, e.row) };
            *map.entry((e.var, e.block, r, c)).or_insert(0.0) += e.value;
        }
        self.entries = map
            .into_iter()
            .filter(|(_, v)| *v != 0.0)
            .map(|((var, block, row, col), value)| SdpaEntry { var, block, row, col, value })
            .collect();
    }

    pub fn validate(&self) -> Result<()> {
        if self.c.len() != self.num_vars {
            return Err(Error::Input(format!(
                "objective has {} entries for {} variables",
                self.c.len(),
                self.num_vars
            )));
        }
        for e in &self.entries {
            let size = *self
                .block_sizes
                .get(e.block)
                .ok_or_else(|| Error::Input(format!("entry references block {}", e.block + 1)))?;
            let dim = size.unsigned_abs() as usize;
            if e.var > self.num_vars || e.row >= dim || e.col >= dim {
                return Err(Error::Input(format!("entry {e:?} out of range")));
            }
            if size < 0 && e.row != e.col {
                return Err(Error::Input(format!("off-diagonal entry {e:?} in a diagonal block")));
            }
            if !e.value.is_finite() {
                return Err(Error::Input(format!("non-finite coefficient in {e:?}")));
            }
        }
        Ok(())
    }
}

/// Sparse symmetric coefficient with both triangles listed.
type Sparse = Vec<(usize, usize, f64)>;

struct PsdBlock {
    size: usize,
    c: DMatrix<f64>,
    /// `(variable, A_i)` pairs for variables present in this block.
    a: Vec<(usize, Sparse)>,
}

/// Internal form: maximize `b.y` s.t. `C - sum y_i A_i >= 0` blockwise and
/// `c_r - sum a_ri y_i >= 0` for every linear row.
struct Internal {
    m: usize,
    b: DVector<f64>,
    blocks: Vec<PsdBlock>,
    lp_c: Vec<f64>,
    lp_a: Vec<Vec<(usize, f64)>>,
    /// Original index and scale of each internal variable: `y_orig = scale * y`.
    var_map: Vec<(usize, f64)>,
    /// Objective values of the original problem are `obj_scale` times internal ones.
    obj_scale: f64,
}

fn preprocess(p: &BlockSdp) -> std::result::Result<Internal, SolverStatus> {
    let nb = p.block_sizes.len();
    let mut used = vec![false; p.num_vars + 1];
    for e in &p.entries {
        used[e.var] = true;
    }
    // A variable in no constraint is free; with a nonzero objective the problem is unbounded.
    let mut keep = Vec::new();
    for i in 0..p.num_vars {
        if used[i + 1] {
            keep.push(i);
        } else if p.c[i] != 0.0 {
            return Err(SolverStatus::Infeasible);
        }
    }
    let new_index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(k, &i)| (i + 1, k)).collect();

    // Active rows per PSD block: those touched by some coefficient.
    let mut active: Vec<Vec<bool>> = p.block_sizes.iter().map(|s| vec![false; s.unsigned_abs() as usize]).collect();
    for e in &p.entries {
        active[e.block][e.row] = true;
        active[e.block][e.col] = true;
    }
    let mut blocks = Vec::new();
    let mut lp_c = Vec::new();
    let mut lp_a: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut lp_rows: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); nb];
    let mut psd_index: Vec<Option<(usize, Vec<Option<usize>>)>> = vec![None; nb];
    for (bi, &size) in p.block_sizes.iter().enumerate() {
        if size < 0 {
            for (r, &on) in active[bi].iter().enumerate() {
                if on {
                    lp_rows[bi].insert(r, lp_c.len());
                    lp_c.push(0.0);
                    lp_a.push(Vec::new());
                }
            }
        } else {
            let mut map = vec![None; size as usize];
            let mut k = 0;
            for (r, &on) in active[bi].iter().enumerate() {
                if on {
                    map[r] = Some(k);
                    k += 1;
                }
            }
            if k > 0 {
                psd_index[bi] = Some((blocks.len(), map));
                blocks.push(PsdBlock { size: k, c: DMatrix::zeros(k, k), a: Vec::new() });
            }
        }
    }
    let mut block_vars: Vec<BTreeMap<usize, Sparse>> = vec![BTreeMap::new(); blocks.len()];
    for e in &p.entries {
        if p.block_sizes[e.block] < 0 {
            let r = lp_rows[e.block][&e.row];
            if e.var == 0 {
                lp_c[r] -= e.value;
            } else {
                lp_a[r].push((new_index[&e.var], -e.value));
            }
            continue;
        }
        let (bi, map) = psd_index[e.block].as_ref().expect("active block");
        let (r, c) = (map[e.row].unwrap(), map[e.col].unwrap());
        if e.var == 0 {
            blocks[*bi].c[(r, c)] -= e.value;
            if r != c {
                blocks[*bi].c[(c, r)] -= e.value;
            }
        } else {
            let list = block_vars[*bi].entry(new_index[&e.var]).or_default();
            list.push((r, c, -e.value));
            if r != c {
                list.push((c, r, -e.value));
            }
        }
    }
    for (blk, vars) in blocks.iter_mut().zip(block_vars) {
        blk.a = vars.into_iter().collect();
    }
    // Rows with no variable are either vacuous or contradictory.
    let mut k = 0;
    while k < lp_c.len() {
        if lp_a[k].is_empty() {
            if lp_c[k] < 0.0 {
                return Err(SolverStatus::Infeasible);
            }
            lp_c.swap_remove(k);
            lp_a.swap_remove(k);
        } else {
            k += 1;
        }
    }
    let m = keep.len();
    let b = DVector::from_iterator(m, keep.iter().map(|&i| -p.c[i]));
    let mut int =
        Internal { m, b, blocks, lp_c, lp_a, var_map: keep.into_iter().map(|i| (i, 1.0)).collect(), obj_scale: 1.0 };
    scale(&mut int);
    Ok(int)
}

/// Diagonal congruence per PSD block, row normalization of the linear block,
/// then column normalization of the variables.
fn scale(p: &mut Internal) {
    for blk in &mut p.blocks {
        let mut rowmax = vec![0.0f64; blk.size];
        for r in 0..blk.size {
            for c in 0..blk.size {
                rowmax[r] = rowmax[r].max(blk.c[(r, c)].abs());
            }
        }
        for (_, a) in &blk.a {
            for &(r, _, v) in a {
                rowmax[r] = rowmax[r].max(v.abs());
            }
        }
        let d: Vec<f64> = rowmax.iter().map(|&v| if v > 0.0 { 1.0 / v.sqrt() } else { 1.0 }).collect();
        for r in 0..blk.size {
            for c in 0..blk.size {
                blk.c[(r, c)] *= d[r] * d[c];
            }
        }
        for (_, a) in &mut blk.a {
            for e in a.iter_mut() {
                e.2 *= d[e.0] * d[e.1];
            }
        }
    }
    for (c, row) in p.lp_c.iter_mut().zip(&mut p.lp_a) {
        let w = row.iter().fold(c.abs(), |acc, &(_, v)| acc.max(v.abs()));
        if w > 0.0 {
            *c /= w;
            for e in row.iter_mut() {
                e.1 /= w;
            }
        }
    }
    let mut colmax = vec![0.0f64; p.m];
    for blk in &p.blocks {
        for (j, a) in &blk.a {
            for &(_, _, v) in a {
                colmax[*j] = colmax[*j].max(v.abs());
            }
        }
    }
    for row in &p.lp_a {
        for &(j, v) in row {
            colmax[j] = colmax[j].max(v.abs());
        }
    }
    let u: Vec<f64> = colmax.iter().map(|&v| if v > 0.0 { 1.0 / v } else { 1.0 }).collect();
    for blk in &mut p.blocks {
        for (j, a) in &mut blk.a {
            for e in a.iter_mut() {
                e.2 *= u[*j];
            }
        }
    }
    for row in &mut p.lp_a {
        for e in row.iter_mut() {
            e.1 *= u[e.0];
        }
    }
    for j in 0..p.m {
        p.b[j] *= u[j];
        p.var_map[j].1 *= u[j];
    }
    let beta = p.b.amax();
    if beta > 0.0 {
        p.b /= beta;
        p.obj_scale = beta;
    }
}

/// Primal-dual iterate: `X` and `S` per PSD block, `x`, `s` for the linear rows.
#[derive(Clone)]
struct Point {
    x: Vec<DMatrix<f64>>,
    s: Vec<DMatrix<f64>>,
    xl: DVector<f64>,
    sl: DVector<f64>,
    y: DVector<f64>,
}

fn dot(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.component_mul(b).sum()
}

fn sparse_dot(a: &Sparse, z: &DMatrix<f64>) -> f64 {
    a.iter().map(|&(r, c, v)| v * z[(r, c)]).sum()
}

impl Internal {
    fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.size).sum::<usize>() + self.lp_c.len()
    }

    /// `A(Z)` for block matrices `z` and linear part `zl`.
    fn apply_a(&self, z: &[DMatrix<f64>], zl: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.m);
        for (blk, zb) in self.blocks.iter().zip(z) {
            for (j, a) in &blk.a {
                out[*j] += sparse_dot(a, zb);
            }
        }
        for (r, row) in self.lp_a.iter().enumerate() {
            for &(j, v) in row {
                out[j] += v * zl[r];
            }
        }
        out
    }

    /// `C - sum y_i A_i`.
    fn slack(&self, y: &DVector<f64>) -> (Vec<DMatrix<f64>>, DVector<f64>) {
        let mut mats: Vec<DMatrix<f64>> = self.blocks.iter().map(|b| b.c.clone()).collect();
        for (blk, m) in self.blocks.iter().zip(&mut mats) {
            for (j, a) in &blk.a {
                for &(r, c, v) in a {
                    m[(r, c)] -= y[*j] * v;
                }
            }
        }
        let lin = DVector::from_iterator(
            self.lp_c.len(),
            self.lp_c.iter().zip(&self.lp_a).map(|(c, row)| c - row.iter().map(|&(j, v)| y[j] * v).sum::<f64>()),
        );
        (mats, lin)
    }

    fn norm_c(&self) -> f64 {
        let mut s: f64 = self.blocks.iter().map(|b| b.c.norm_squared()).sum();
        s += self.lp_c.iter().map(|v| v * v).sum::<f64>();
        s.sqrt()
    }

    fn initial_point(&self) -> Point {
        let mut x = Vec::new();
        let mut s = Vec::new();
        let mut a_norm = vec![0.0f64; self.m];
        for blk in &self.blocks {
            for (j, a) in &blk.a {
                a_norm[*j] += a.iter().map(|e| e.2 * e.2).sum::<f64>();
            }
        }
        for row in &self.lp_a {
            for &(j, v) in row {
                a_norm[j] += v * v;
            }
        }
        let a_norm: Vec<f64> = a_norm.iter().map(|v| v.sqrt()).collect();
        let n = self.dim() as f64;
        let xi =
            (0..self.m).map(|j| n * (1.0 + self.b[j].abs()) / (1.0 + a_norm[j])).fold(10.0f64.max(n.sqrt()), f64::max);
        let eta = a_norm.iter().copied().fold(10.0f64.max(n.sqrt()).max(self.norm_c()), f64::max);
        for blk in &self.blocks {
            x.push(DMatrix::identity(blk.size, blk.size) * xi);
            s.push(DMatrix::identity(blk.size, blk.size) * eta);
        }
        Point {
            x,
            s,
            xl: DVector::from_element(self.lp_c.len(), xi),
            sl: DVector::from_element(self.lp_c.len(), eta),
            y: DVector::zeros(self.m),
        }
    }

    /// `sum_i y_i A_i`, blockwise and for the linear rows.
    fn apply_at(&self, y: &DVector<f64>) -> (Vec<DMatrix<f64>>, DVector<f64>) {
        let mut mats: Vec<DMatrix<f64>> = self.blocks.iter().map(|b| DMatrix::zeros(b.size, b.size)).collect();
        for (blk, m) in self.blocks.iter().zip(&mut mats) {
            for (j, a) in &blk.a {
                for &(r, c, v) in a {
                    m[(r, c)] += y[*j] * v;
                }
            }
        }
        let lin = DVector::from_iterator(
            self.lp_a.len(),
            self.lp_a.iter().map(|row| row.iter().map(|&(j, v)| y[j] * v).sum::<f64>()),
        );
        (mats, lin)
    }

    /// Schur complement `M_ij = Tr(A_i W A_j W) + sum_r a_ri a_rj x_r / s_r`.
    fn schur(&self, w: &[DMatrix<f64>], lp_ratio: &DVector<f64>) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.m, self.m);
        for (blk, wb) in self.blocks.iter().zip(w) {
            let n = blk.size;
            let mut g = DMatrix::zeros(n, n);
            for (j, aj) in &blk.a {
                g.fill(0.0);
                // W A_j W as a sum of outer products
                for &(p, q, v) in aj {
                    for r in 0..n {
                        let wr = v * wb[(r, p)];
                        if wr == 0.0 {
                            continue;
                        }
                        for t in 0..n {
                            g[(r, t)] += wr * wb[(q, t)];
                        }
                    }
                }
                for (i, ai) in &blk.a {
                    m[(*i, *j)] += sparse_dot(ai, &g);
                }
            }
        }
        for (r, row) in self.lp_a.iter().enumerate() {
            for &(i, vi) in row {
                for &(j, vj) in row {
                    m[(i, j)] += lp_ratio[r] * vi * vj;
                }
            }
        }
        (&m + m.transpose()) * 0.5
    }
}

/// Nesterov-Todd scaling of one block: `W = G G^T` with
/// `G^T S G = G^-1 X G^-T = diag(d)`.
struct NtScaling {
    g: DMatrix<f64>,
    ginv: DMatrix<f64>,
    w: DMatrix<f64>,
    d: DVector<f64>,
}

fn nt_scaling(x: &DMatrix<f64>, s: &DMatrix<f64>) -> Option<NtScaling> {
    let lx = x.clone().cholesky()?.l();
    let ls = s.clone().cholesky()?.l();
    let svd = (ls.transpose() * &lx).svd(false, true);
    let v = svd.v_t?.transpose();
    let d = svd.singular_values;
    if d.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return None;
    }
    let n = x.nrows();
    let lxinv = lx.solve_lower_triangular(&DMatrix::identity(n, n))?;
    let g = &lx * &v * DMatrix::from_diagonal(&d.map(|v| 1.0 / v.sqrt()));
    let ginv = DMatrix::from_diagonal(&d.map(f64::sqrt)) * v.transpose() * lxinv;
    let w = &g * g.transpose();
    Some(NtScaling { g, ginv, w, d })
}

fn max_step_psd(x: &DMatrix<f64>, dx: &DMatrix<f64>) -> Option<f64> {
    let l = x.clone().cholesky()?.l();
    let linv = l.try_inverse()?;
    let w = &linv * dx * linv.transpose();
    let w = (&w + w.transpose()) * 0.5;
    let lmin = w.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
    Some(if lmin < 0.0 { -1.0 / lmin } else { f64::INFINITY })
}

fn max_step_lp(x: &DVector<f64>, dx: &DVector<f64>) -> f64 {
    x.iter().zip(dx.iter()).filter(|(_, d)| **d < 0.0).map(|(v, d)| -v / d).fold(f64::INFINITY, f64::min)
}

struct Direction {
    dx: Vec<DMatrix<f64>>,
    dxl: DVector<f64>,
    ds: Vec<DMatrix<f64>>,
    dsl: DVector<f64>,
    dy: DVector<f64>,
}

/// Solves an assembled problem.
pub fn solve(p: &SdpProblem, params: &SolverParams) -> Result<SolverResult> {
    if p.num_vars() == 0 {
        return Err(Error::Domain("problem has no variables".into()));
    }
    solve_block(&BlockSdp::from_problem(p), params)
}

/// Solves a numeric block SDP.
pub fn solve_block(p: &BlockSdp, params: &SolverParams) -> Result<SolverResult> {
    params.validate()?;
    p.validate()?;
    let failed = |status| SolverResult {
        primal_objective: f64::NAN,
        dual_objective: f64::NAN,
        gap: f64::INFINITY,
        primal_residual: f64::INFINITY,
        dual_residual: f64::INFINITY,
        iterations: 0,
        status,
        y: vec![f64::NAN; p.num_vars],
    };
    let prob = match preprocess(p) {
        Ok(q) => q,
        Err(status) => return Ok(failed(status)),
    };
    if prob.m == 0 {
        // Nothing left to optimize: feasible iff every constant block is PSD.
        let ok = prob.blocks.iter().all(|b| b.c.symmetric_eigenvalues().iter().all(|&v| v >= -1e-12));
        let mut r = failed(if ok { SolverStatus::Optimal } else { SolverStatus::Infeasible });
        if ok {
            r.primal_objective = p.offset;
            r.dual_objective = p.offset;
            r.gap = 0.0;
            r.primal_residual = 0.0;
            r.dual_residual = 0.0;
            r.y = vec![0.0; p.num_vars];
        }
        return Ok(r);
    }
    Ok(run(&prob, p, params))
}

struct Snapshot {
    pobj: f64,
    dobj: f64,
    gap: f64,
    pres: f64,
    dres: f64,
    iterations: usize,
    y: DVector<f64>,
}

fn run(prob: &Internal, orig: &BlockSdp, params: &SolverParams) -> SolverResult {
    let n_dim = prob.dim() as f64;
    let norm_b = prob.b.norm();
    let norm_c = prob.norm_c();
    let mut pt = prob.initial_point();
    let mut status = SolverStatus::MaxIter;
    let mut iterations = 0;
    let mut best: Option<(f64, Snapshot)> = None;
    loop {
        let (cs, cl) = prob.slack(&pt.y);
        let rd: Vec<DMatrix<f64>> = cs.iter().zip(&pt.s).map(|(c, s)| c - s).collect();
        let rdl = &cl - &pt.sl;
        let rp = &prob.b - prob.apply_a(&pt.x, &pt.xl);
        let pres = rp.norm() / (1.0 + norm_b);
        let dres = (rd.iter().map(|m| m.norm_squared()).sum::<f64>() + rdl.norm_squared()).sqrt() / (1.0 + norm_c);
        let cx: f64 = prob.blocks.iter().zip(&pt.x).map(|(b, x)| dot(&b.c, x)).sum::<f64>()
            + prob.lp_c.iter().zip(pt.xl.iter()).map(|(c, x)| c * x).sum::<f64>();
        let pobj = orig.offset + prob.obj_scale * prob.b.dot(&pt.y);
        let dobj = orig.offset + prob.obj_scale * cx;
        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        debug!("iter {iterations:3} primal {pobj:.10e} dual {dobj:.10e} gap {gap:.3e} pres {pres:.3e} dres {dres:.3e}");
        if !pobj.is_finite() || !dobj.is_finite() {
            status = SolverStatus::NumericalFailure;
            break;
        }
        let merit = (gap / params.duality_gap_tolerance)
            .max(pres / params.feasibility_tolerance)
            .max(dres / params.feasibility_tolerance);
        if best.as_ref().is_none_or(|(m, _)| merit < *m) {
            let snap = Snapshot { pobj, dobj, gap, pres, dres, iterations, y: pt.y.clone() };
            best = Some((merit, snap));
        }
        if merit <= 1.0 {
            status = SolverStatus::Optimal;
            break;
        }
        if pt.y.amax() > 1e14 || pt.xl.amax() > 1e14 || pt.x.iter().any(|x| x.amax() > 1e14) {
            status = SolverStatus::Infeasible;
            break;
        }
        if iterations >= params.max_iterations {
            break;
        }
        iterations += 1;

        let mu = (pt.x.iter().zip(&pt.s).map(|(x, s)| dot(x, s)).sum::<f64>() + pt.xl.dot(&pt.sl)) / n_dim;
        let Some(nt) = pt.x.iter().zip(&pt.s).map(|(x, s)| nt_scaling(x, s)).collect::<Option<Vec<_>>>() else {
            debug!("scaling breakdown at iteration {iterations}");
            status = SolverStatus::NumericalFailure;
            break;
        };
        let ws: Vec<DMatrix<f64>> = nt.iter().map(|s| s.w.clone()).collect();
        let ratio = pt.xl.component_div(&pt.sl);
        let Some(chol) = factor(prob.schur(&ws, &ratio)) else {
            debug!("Schur complement breakdown at iteration {iterations}");
            status = SolverStatus::NumericalFailure;
            break;
        };
        // Rp + A(W Rd W), shared by predictor and corrector.
        let wrdw: Vec<DMatrix<f64>> = ws.iter().zip(&rd).map(|(w, r)| w * r * w).collect();
        let base = &rp + prob.apply_a(&wrdw, &ratio.component_mul(&rdl));

        // `target` is the scaled complementarity residual R in
        // sym(D dS~ + dX~ D) = R; `targetl` its linear-row counterpart.
        let direction = |target: &[DMatrix<f64>], targetl: &DVector<f64>| -> Direction {
            let gqg: Vec<DMatrix<f64>> = target
                .iter()
                .zip(&nt)
                .map(|(r, s)| {
                    let q = DMatrix::from_fn(r.nrows(), r.ncols(), |i, j| 2.0 * r[(i, j)] / (s.d[i] + s.d[j]));
                    &s.g * q * s.g.transpose()
                })
                .collect();
            let tl = targetl.component_div(&pt.sl);
            let rhs = &base - prob.apply_a(&gqg, &tl);
            let dy = chol.solve(&rhs);
            let (ady, adyl) = prob.apply_at(&dy);
            let ds: Vec<DMatrix<f64>> = rd.iter().zip(&ady).map(|(r, a)| r - a).collect();
            let dsl = &rdl - &adyl;
            let dx: Vec<DMatrix<f64>> = gqg
                .iter()
                .zip(&nt)
                .zip(&ds)
                .map(|((q, s), d)| {
                    let v = q - &s.w * d * &s.w;
                    (&v + v.transpose()) * 0.5
                })
                .collect();
            let mut dxl = &tl - ratio.component_mul(&dsl);
            let (mut dx, mut ds, mut dsl, mut dy) = (dx, ds, dsl, dy);
            // Refinement: move dy along M^-1 (Rp - A(dX)); the complementarity
            // equation is linear in dy, so it stays satisfied. A correction is
            // kept only if it shrinks the residual.
            let mut e = &rp - prob.apply_a(&dx, &dxl);
            for _ in 0..REFINEMENT_STEPS {
                let delta = chol.solve(&e);
                let (ad, adl) = prob.apply_at(&delta);
                let dx2: Vec<DMatrix<f64>> = dx
                    .iter()
                    .zip(&ad)
                    .zip(&nt)
                    .map(|((x, a), sc)| {
                        let v = &sc.w * a * &sc.w;
                        x + (&v + v.transpose()) * 0.5
                    })
                    .collect();
                let dxl2 = &dxl + ratio.component_mul(&adl);
                let e2 = &rp - prob.apply_a(&dx2, &dxl2);
                if e2.norm() >= e.norm() {
                    break;
                }
                for (s, a) in ds.iter_mut().zip(&ad) {
                    *s -= a;
                }
                dsl -= &adl;
                dy += delta;
                dx = dx2;
                dxl = dxl2;
                e = e2;
            }
            Direction { dx, dxl, ds, dsl, dy }
        };
        let steps = |d: &Direction| -> Option<(f64, f64)> {
            let mut ap = max_step_lp(&pt.xl, &d.dxl);
            let mut ad = max_step_lp(&pt.sl, &d.dsl);
            for (x, dx) in pt.x.iter().zip(&d.dx) {
                ap = ap.min(max_step_psd(x, dx)?);
            }
            for (s, ds) in pt.s.iter().zip(&d.ds) {
                ad = ad.min(max_step_psd(s, ds)?);
            }
            Some((ap, ad))
        };

        let xs_l = pt.xl.component_mul(&pt.sl);
        let pred: Vec<DMatrix<f64>> = nt.iter().map(|s| -DMatrix::from_diagonal(&s.d.map(|v| v * v))).collect();
        let aff = direction(&pred, &-&xs_l);
        let Some((ap, ad)) = steps(&aff) else {
            status = SolverStatus::NumericalFailure;
            break;
        };
        let (ap, ad) = (ap.min(1.0), ad.min(1.0));
        let mu_aff = (pt
            .x
            .iter()
            .zip(&aff.dx)
            .zip(pt.s.iter().zip(&aff.ds))
            .map(|((x, dx), (s, ds))| dot(&(x + dx * ap), &(s + ds * ad)))
            .sum::<f64>()
            + (&pt.xl + &aff.dxl * ap).dot(&(&pt.sl + &aff.dsl * ad)))
            / n_dim;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);
        let corr: Vec<DMatrix<f64>> = nt
            .iter()
            .zip(aff.dx.iter().zip(&aff.ds))
            .zip(&pred)
            .map(|((s, (dx, ds)), p)| {
                let sx = &s.ginv * dx * s.ginv.transpose();
                let ss = s.g.transpose() * ds * &s.g;
                let prod = &sx * &ss;
                let n = p.nrows();
                DMatrix::identity(n, n) * (sigma * mu) + p - (&prod + prod.transpose()) * 0.5
            })
            .collect();
        let corrl = DVector::from_element(prob.lp_c.len(), sigma * mu) - &xs_l - aff.dxl.component_mul(&aff.dsl);
        let dir = direction(&corr, &corrl);
        let Some((ap, ad)) = steps(&dir) else {
            status = SolverStatus::NumericalFailure;
            break;
        };
        let ap = (params.step_fraction * ap).min(1.0);
        let ad = (params.step_fraction * ad).min(1.0);
        for (x, dx) in pt.x.iter_mut().zip(&dir.dx) {
            *x += dx * ap;
        }
        pt.xl += &dir.dxl * ap;
        for (s, ds) in pt.s.iter_mut().zip(&dir.ds) {
            *s += ds * ad;
        }
        pt.sl += &dir.dsl * ad;
        pt.y += &dir.dy * ad;
        if dres < DUAL_RESET_THRESHOLD {
            // Near dual feasibility, rebuild S from y to stop rounding drift.
            let (cs, cl) = prob.slack(&pt.y);
            if cl.iter().all(|&v| v > 0.0) && cs.iter().all(|m| m.clone().cholesky().is_some()) {
                pt.s = cs;
                pt.sl = cl;
            }
        }
    }
    let (_, snap) = best.expect("at least one iterate is evaluated");
    let mut y = vec![0.0; orig.num_vars];
    for (k, &(i, scale)) in prob.var_map.iter().enumerate() {
        y[i] = snap.y[k] * scale;
    }
    SolverResult {
        primal_objective: snap.pobj,
        dual_objective: snap.dobj,
        gap: snap.gap,
        primal_residual: snap.pres,
        dual_residual: snap.dres,
        iterations: snap.iterations,
        status,
        y,
    }
}

/// Cholesky factor of the Jacobi-equilibrated Schur complement.
struct SchurFactor {
    chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
    /// `D^-1/2` for `M = D^1/2 (D^-1/2 M D^-1/2) D^1/2`.
    dinv: DVector<f64>,
}

impl SchurFactor {
    fn solve(&self, rhs: &DVector<f64>) -> DVector<f64> {
        let z = self.chol.solve(&rhs.component_mul(&self.dinv));
        z.component_mul(&self.dinv)
    }
}

/// Factors `M` after equilibration, retrying with small diagonal shifts.
fn factor(m: DMatrix<f64>) -> Option<SchurFactor> {
    let dinv = m.diagonal().map(|v| if v > 0.0 { 1.0 / v.sqrt() } else { 1.0 });
    let scaled = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * dinv[i] * dinv[j]);
    for delta in [0.0, 1e-14, 1e-12, 1e-10] {
        let mut t = scaled.clone();
        for i in 0..t.nrows() {
            t[(i, i)] += delta;
        }
        if let Some(chol) = t.cholesky() {
            if delta > 0.0 {
                debug!("Schur complement regularized by {delta:e}");
            }
            return Some(SchurFactor { chol, dinv });
        }
    }
    None
}

/// Relative dual residual below which `S` is recomputed as `C - A^T y`.
const DUAL_RESET_THRESHOLD: f64 = 1e-6;

/// Passes of iterative refinement applied to each Newton direction.
const REFINEMENT_STEPS: usize = 3;

/// Gap threshold a result must meet before its dual objective is turned into a bound.
pub const BOUND_GAP_TOLERANCE: f64 = 1e-7;

/// Default margin added to the dual objective before flooring.
pub const DEFAULT_SAFETY: f64 = 1e-5;

/// Integer bound `floor(dual + safety)`; refuses non-optimal or loose results.
pub fn bound_from_result(r: &SolverResult, safety: f64) -> Result<BoundResult> {
    if r.status != SolverStatus::Optimal {
        return Err(Error::Solver(format!("solver status {:?}; no bound produced", r.status)));
    }
    if !(r.gap <= BOUND_GAP_TOLERANCE) {
        return Err(Error::Solver(format!("duality gap {:.3e} exceeds {BOUND_GAP_TOLERANCE:e}", r.gap)));
    }
    let v = (r.dual_objective + safety).floor();
    if !(0.0..1e30).contains(&v) {
        return Err(Error::Solver(format!("dual objective {} out of range", r.dual_objective)));
    }
    Ok(BoundResult::new(v as u128, Method::Sdp)
        .with("primal_objective", format!("{:.12}", r.primal_objective))
        .with("dual_objective", format!("{:.12}", r.dual_objective))
        .with("gap", format!("{:.3e}", r.gap))
        .with("primal_residual", format!("{:.3e}", r.primal_residual))
        .with("dual_residual", format!("{:.3e}", r.dual_residual))
        .with("iterations", r.iterations.to_string()))
}
