use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{Mat, Rat, SymMat};
use crate::conic::{newton_halved_lattice, newton_vertices};
use crate::error::{Error, Result};
use crate::poly::{MPoly, Monomial};
use crate::quadform::{is_psd, weighted_square_decomposition, weighted_squares_in_basis};

use super::cert::{verify_gram, Rejection, SosCert};
use super::numeric::{alternate, AffineBlocks, Projections};
use super::rationalize::{denominator_ladder, numeric_kernel, rational_subspace, round_vec};

/// A square block `multiplier * w^T H w` with `w = W * x^monomials`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramBlock {
    pub multiplier: MPoly,
    pub monomials: Vec<Vec<u32>>,
    /// Rows hold the coefficients of the current basis polynomials with
    /// respect to `monomials`.
    pub w: Mat,
}

impl GramBlock {
    pub fn new(multiplier: MPoly, monomials: Vec<Vec<u32>>) -> GramBlock {
        let w = Mat::identity(monomials.len());
        GramBlock { multiplier, monomials, w }
    }

    pub fn size(&self) -> usize {
        self.w.rows()
    }

    pub fn basis_polys(&self) -> Vec<MPoly> {
        let nvars = self.multiplier.nvars();
        (0..self.w.rows())
            .map(|r| {
                MPoly::from_terms(
                    nvars,
                    self.w.row(r).iter().zip(&self.monomials).map(|(c, m)| (m.clone(), c.clone())),
                )
            })
            .collect()
    }

    /// `W^T H W`: the same form in the monomial basis.
    pub fn to_monomial_basis(&self, h: &SymMat) -> SymMat {
        let g = self.w.transpose().mul(&h.to_mat()).and_then(|m| m.mul(&self.w)).expect("conforming shapes");
        SymMat::from_mat(&g).expect("congruence preserves symmetry")
    }

    fn keep_rows(&mut self, rows: Vec<Vec<Rat>>) {
        let m = self.monomials.len();
        self.w = if rows.is_empty() { Mat::zeros(0, m) } else { Mat::from_rows(rows).expect("rectangular") };
    }
}

/// Index of `(i, j)`, `i <= j`, in the row-major upper triangle of a `k x k` block.
fn tri_index(k: usize, i: usize, j: usize) -> usize {
    i * k - i * (i + 1) / 2 + j
}

/// Exact affine parametrization `x = x0 + sum t_j dirs_j` of stacked upper
/// triangles. Each direction is 1 in its own free coordinate and 0 in the
/// other free coordinates.
#[derive(Clone, Debug)]
struct LinearSystem {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    x0: Vec<Rat>,
    dirs: Vec<Vec<Rat>>,
}

impl LinearSystem {
    fn build(target: &MPoly, blocks: &[GramBlock]) -> Result<Option<LinearSystem>> {
        let nvars = target.nvars();
        let mut columns: Vec<MPoly> = Vec::new();
        let mut offsets = Vec::new();
        let mut sizes = Vec::new();
        for b in blocks {
            if b.multiplier.nvars() != nvars {
                return Err(Error::Dimension("multiplier over a different ring".into()));
            }
            offsets.push(columns.len());
            sizes.push(b.size());
            let w = b.basis_polys();
            for i in 0..w.len() {
                for j in i..w.len() {
                    let mut p = &(&w[i] * &w[j]) * &b.multiplier;
                    if i != j {
                        p = p.scale(&Rat::from(2));
                    }
                    columns.push(p);
                }
            }
        }
        let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
        for p in columns.iter().chain(std::iter::once(target)) {
            for (m, _) in p.terms() {
                let next = rows.len();
                rows.entry(m.clone()).or_insert(next);
            }
        }
        let mut a = Mat::zeros(rows.len(), columns.len());
        for (c, p) in columns.iter().enumerate() {
            for (m, v) in p.terms() {
                a.set(rows[m], c, v.clone());
            }
        }
        let mut b = vec![Rat::zero(); rows.len()];
        for (m, v) in target.terms() {
            b[rows[m]] = v.clone();
        }
        let solved = if columns.is_empty() {
            b.iter().all(Rat::is_zero).then(|| (Vec::new(), Vec::new()))
        } else {
            a.affine_solution_of(&b)?
        };
        Ok(solved.map(|(x0, dirs)| LinearSystem { sizes, offsets, x0, dirs }))
    }

    /// Value of a coordinate when it does not depend on the parameters.
    fn forced(&self, k: usize) -> Option<&Rat> {
        self.dirs.iter().all(|d| d[k].is_zero()).then(|| &self.x0[k])
    }

    fn point(&self, t: &[Rat]) -> Vec<Rat> {
        let mut x = self.x0.clone();
        for (d, tj) in self.dirs.iter().zip(t) {
            if tj.is_zero() {
                continue;
            }
            for (xi, di) in x.iter_mut().zip(d) {
                if !di.is_zero() {
                    *xi += tj * di;
                }
            }
        }
        x
    }

    fn blocks(&self, x: &[Rat]) -> Vec<SymMat> {
        self.sizes
            .iter()
            .zip(&self.offsets)
            .map(|(&k, &off)| {
                let mut s = SymMat::zeros(k);
                for i in 0..k {
                    for j in i..k {
                        s.set(i, j, x[off + tri_index(k, i, j)].clone());
                    }
                }
                s
            })
            .collect()
    }

    fn numeric(&self) -> AffineBlocks {
        AffineBlocks::new(
            self.sizes.clone(),
            self.x0.iter().map(Rat::to_f64).collect(),
            self.dirs.iter().map(|d| d.iter().map(Rat::to_f64).collect()).collect(),
        )
    }
}

/// Why no psd Gram representation exists, proved from exact data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfeasibleReason {
    OddDegree,
    /// A vertex of the Newton polytope with a negative coefficient or an
    /// odd exponent.
    NewtonVertex { exponent: Vec<u32>, coefficient: Rat },
    /// Diagonal entry `index` of block `block` equals `value < 0` in every
    /// representation.
    ForcedNegativeDiagonal { block: usize, index: usize, value: Rat },
    /// The coefficient-matching system has no solution.
    Inconsistent,
    /// The representation is unique and not psd.
    UniqueNotPsd,
}

impl std::fmt::Display for InfeasibleReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InfeasibleReason::OddDegree => write!(f, "odd degree"),
            InfeasibleReason::NewtonVertex { exponent, coefficient } => {
                write!(f, "Newton vertex {exponent:?} has coefficient {coefficient}")
            }
            InfeasibleReason::ForcedNegativeDiagonal { block, index, value } => {
                write!(f, "diagonal entry {index} of block {block} is forced to {value}")
            }
            InfeasibleReason::Inconsistent => write!(f, "coefficient matching is inconsistent"),
            InfeasibleReason::UniqueNotPsd => write!(f, "the unique Gram matrix is not psd"),
        }
    }
}

/// Three-way answer of a search that is only complete in one direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Certified(T),
    Infeasible(InfeasibleReason),
    Unknown(String),
}

impl<T> Outcome<T> {
    pub fn certified(self) -> Option<T> {
        match self {
            Outcome::Certified(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Outcome::Certified(_))
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, Outcome::Infeasible(_))
    }
}

/// Tuning of the numeric phase.
#[derive(Clone, Copy, Debug)]
pub struct SearchSettings {
    pub projections: Projections,
    /// Eigenvalue floor for the strictly feasible retraction.
    pub nudge: f64,
    /// Random restarts averaged before guessing a common kernel.
    pub restarts: usize,
    /// Relative eigenvalue size below which a direction counts as kernel.
    pub kernel_tol: f64,
    /// Largest projection gap at which a common kernel is still guessed.
    pub stall_gap: f64,
    pub seed: u64,
}

impl Default for SearchSettings {
    fn default() -> SearchSettings {
        SearchSettings { projections: Projections::default(), nudge: 1e-6, restarts: 4, kernel_tol: 1e-5, stall_gap: 1e-2, seed: 7 }
    }
}

/// Psd matrices for every block, in the (possibly reduced) block bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSolution {
    pub blocks: Vec<GramBlock>,
    pub grams: Vec<SymMat>,
}

impl BlockSolution {
    /// Weighted squares for each block.
    pub fn certificates(&self) -> Vec<SosCert> {
        self.blocks
            .iter()
            .zip(&self.grams)
            .map(|(b, h)| {
                weighted_squares_in_basis(h, &b.basis_polys(), b.multiplier.nvars()).expect("verified psd")
            })
            .collect()
    }
}

fn try_round(sys: &LinearSystem, t: &[f64]) -> Option<Vec<SymMat>> {
    for bound in denominator_ladder() {
        let tr = round_vec(t, bound)?;
        let grams = sys.blocks(&sys.point(&tr));
        if grams.iter().all(is_psd) {
            return Some(grams);
        }
    }
    None
}

/// Finds psd `H_b` with `target = sum_b multiplier_b * w_b^T H_b w_b`.
/// Infeasibility is reported only when it follows from exact linear algebra.
pub fn solve_blocks(target: &MPoly, blocks: Vec<GramBlock>, settings: &SearchSettings) -> Result<Outcome<BlockSolution>> {
    let mut blocks = blocks;
    let mut exact = true;
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    loop {
        let Some(sys) = LinearSystem::build(target, &blocks)? else {
            return Ok(if exact {
                Outcome::Infeasible(InfeasibleReason::Inconsistent)
            } else {
                Outcome::Unknown("inconsistent after a numerically guessed reduction".into())
            });
        };

        // exact consequences on the diagonal
        let mut reduced = false;
        for (bi, b) in blocks.iter_mut().enumerate() {
            let k = b.size();
            let mut keep = Vec::new();
            for i in 0..k {
                match sys.forced(sys.offsets[bi] + tri_index(k, i, i)) {
                    Some(v) if v.is_negative() => {
                        return Ok(if exact {
                            Outcome::Infeasible(InfeasibleReason::ForcedNegativeDiagonal {
                                block: bi,
                                index: i,
                                value: v.clone(),
                            })
                        } else {
                            Outcome::Unknown("negative diagonal after a numerically guessed reduction".into())
                        });
                    }
                    Some(v) if v.is_zero() => reduced = true,
                    _ => keep.push(b.w.row(i).to_vec()),
                }
            }
            if keep.len() < k {
                b.keep_rows(keep);
            }
        }
        if reduced {
            continue;
        }

        if sys.dirs.is_empty() {
            let grams = sys.blocks(&sys.x0);
            if grams.iter().all(is_psd) {
                return Ok(Outcome::Certified(BlockSolution { blocks, grams }));
            }
            return Ok(if exact {
                Outcome::Infeasible(InfeasibleReason::UniqueNotPsd)
            } else {
                Outcome::Unknown("unique representation after reduction is not psd".into())
            });
        }

        let fam = sys.numeric();
        let p = fam.nparams();
        let nudged = alternate(&fam, vec![0.0; p], Projections { floor: settings.nudge, ..settings.projections });
        if let Some(grams) = try_round(&sys, &nudged.t) {
            return Ok(Outcome::Certified(BlockSolution { blocks, grams }));
        }
        let plain = alternate(&fam, nudged.t.clone(), settings.projections);
        if let Some(grams) = try_round(&sys, &plain.t) {
            return Ok(Outcome::Certified(BlockSolution { blocks, grams }));
        }
        if plain.gap > settings.stall_gap {
            return Ok(Outcome::Unknown(format!("numeric phase stalled at gap {:.3e}", plain.gap)));
        }

        // average several feasible points to reach the relative interior,
        // then guess the common kernel and restrict to its complement
        let mut avg = plain.t.clone();
        let mut count = 1.0;
        let scale = plain.t.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        for _ in 0..settings.restarts {
            let start: Vec<f64> = (0..p).map(|_| rng.gen_range(-scale..=scale)).collect();
            let run = alternate(&fam, start, settings.projections);
            if run.gap <= plain.gap.max(1e-9) * 10.0 {
                avg.iter_mut().zip(&run.t).for_each(|(a, b)| *a += b);
                count += 1.0;
            }
        }
        avg.iter_mut().for_each(|a| *a /= count);
        let polished = alternate(&fam, avg, settings.projections);
        if let Some(grams) = try_round(&sys, &polished.t) {
            return Ok(Outcome::Certified(BlockSolution { blocks, grams }));
        }
        let x = fam.point(&polished.t);
        let numeric_blocks = fam.blocks(&x);
        let mut changed = false;
        for (b, m) in blocks.iter_mut().zip(&numeric_blocks) {
            // slow convergence leaves kernel eigenvalues of the order of the gap
            let tol = settings.kernel_tol.max(10.0 * polished.gap);
            let kernel = numeric_kernel(m, tol);
            if kernel.is_empty() {
                continue;
            }
            let norm = m.a.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
            let accept = |cand: &[Vec<Rat>]| {
                cand.iter().all(|u| {
                    let uf: Vec<f64> = u.iter().map(Rat::to_f64).collect();
                    let un = uf.iter().map(|v| v * v).sum::<f64>().sqrt();
                    let mu: f64 = (0..m.n)
                        .map(|i| (0..m.n).map(|j| m.get(i, j) * uf[j]).sum::<f64>().powi(2))
                        .sum::<f64>()
                        .sqrt();
                    mu <= tol.max(1e-4) * 10.0 * norm * un
                })
            };
            let Some(k_rat) = rational_subspace(&kernel, accept) else { continue };
            let complement = Mat::from_rows(k_rat).expect("rectangular").nullspace();
            let new_w: Vec<Vec<Rat>> = complement
                .iter()
                .map(|r| {
                    (0..b.monomials.len())
                        .map(|c| (0..b.size()).map(|i| &r[i] * b.w.get(i, c)).sum())
                        .collect()
                })
                .collect();
            b.keep_rows(new_w);
            changed = true;
        }
        if !changed {
            return Ok(Outcome::Unknown("rounding failed and no common kernel was found".into()));
        }
        exact = false;
    }
}

/// Distance reached by alternating projections between the affine set of
/// representations and the psd cone; infinite when the linear system is
/// inconsistent or a diagonal entry is forced negative. Purely numeric.
pub fn numeric_gap(target: &MPoly, blocks: &[GramBlock], settings: &SearchSettings) -> Result<f64> {
    let Some(sys) = LinearSystem::build(target, blocks)? else {
        return Ok(f64::INFINITY);
    };
    for (bi, b) in blocks.iter().enumerate() {
        let k = b.size();
        for i in 0..k {
            if sys.forced(sys.offsets[bi] + tri_index(k, i, i)).is_some_and(Rat::is_negative) {
                return Ok(f64::INFINITY);
            }
        }
    }
    if sys.dirs.is_empty() {
        let psd = sys.blocks(&sys.x0).iter().all(is_psd);
        return Ok(if psd { 0.0 } else { f64::INFINITY });
    }
    let fam = sys.numeric();
    Ok(alternate(&fam, vec![0.0; fam.nparams()], settings.projections).gap)
}

/// Affine family of Gram matrices of `f` for the monomial vector `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramFamily {
    pub monomials: Vec<Vec<u32>>,
    pub g0: SymMat,
    pub basis: Vec<SymMat>,
    /// Diagonal entries that take the same value in every member.
    pub forced: BTreeMap<usize, Rat>,
}

impl GramFamily {
    pub fn member(&self, t: &[Rat]) -> SymMat {
        self.basis.iter().zip(t).fold(self.g0.clone(), |acc, (b, c)| acc.add(&b.scale(c)).expect("same size"))
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

pub fn gram_family(f: &MPoly, v: &[Vec<u32>]) -> Result<GramFamily> {
    if v.is_empty() {
        return Err(Error::Input("empty monomial vector".into()));
    }
    let block = GramBlock::new(MPoly::one(f.nvars()), v.to_vec());
    let Some(sys) = LinearSystem::build(f, std::slice::from_ref(&block))? else {
        return Err(Error::NoGram);
    };
    let k = v.len();
    let g0 = sys.blocks(&sys.x0).remove(0);
    let basis = sys.dirs.iter().map(|d| sys.blocks(d).remove(0)).collect();
    let forced = (0..k).filter_map(|i| sys.forced(tri_index(k, i, i)).map(|r| (i, r.clone()))).collect();
    Ok(GramFamily { monomials: v.to_vec(), g0, basis, forced })
}

/// A psd Gram matrix with respect to a monomial vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramCert {
    pub monomials: Vec<Vec<u32>>,
    pub gram: SymMat,
}

impl GramCert {
    pub fn squares(&self) -> SosCert {
        weighted_square_decomposition(&self.gram, &self.monomials).expect("verified psd")
    }
}

/// Exact obstacles visible before any numerics: odd degree, and Newton
/// vertices with a negative coefficient or an odd exponent.
pub fn quick_obstruction(f: &MPoly) -> Result<Option<InfeasibleReason>> {
    if f.is_zero() {
        return Ok(None);
    }
    if f.total_degree().unwrap_or(0) % 2 == 1 {
        return Ok(Some(InfeasibleReason::OddDegree));
    }
    for e in newton_vertices(f)? {
        let c = f.coeff(&e);
        if c.is_negative() || e.iter().any(|x| x % 2 == 1) {
            return Ok(Some(InfeasibleReason::NewtonVertex { exponent: e, coefficient: c }));
        }
    }
    Ok(None)
}

/// Psd Gram matrix of `f` over the lattice points of half its Newton polytope.
pub fn find_gram_with(f: &MPoly, settings: &SearchSettings) -> Result<Outcome<GramCert>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if let Some(reason) = quick_obstruction(f)? {
        return Ok(Outcome::Infeasible(reason));
    }
    let v = newton_halved_lattice(f)?;
    let block = GramBlock::new(MPoly::one(f.nvars()), v.clone());
    Ok(match solve_blocks(f, vec![block], settings)? {
        Outcome::Certified(sol) => {
            let gram = sol.blocks[0].to_monomial_basis(&sol.grams[0]);
            verify_gram(f, &gram, &v).expect("exactly verified");
            Outcome::Certified(GramCert { monomials: v, gram })
        }
        Outcome::Infeasible(r) => Outcome::Infeasible(r),
        Outcome::Unknown(s) => Outcome::Unknown(s),
    })
}

/// Checks a certificate given either as weighted squares or as a Gram matrix.
pub fn verify_sos(f: &MPoly, cert: &SosCertificate) -> std::result::Result<(), Rejection> {
    match cert {
        SosCertificate::Squares(c) => c.verify(f),
        SosCertificate::Gram(g) => verify_gram(f, &g.gram, &g.monomials),
    }
}

/// Either certificate form accepted by [`verify_sos`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SosCertificate {
    Squares(SosCert),
    Gram(GramCert),
}

pub fn find_gram(f: &MPoly) -> Result<Outcome<GramCert>> {
    find_gram_with(f, &SearchSettings::default())
}

/// Sum-of-squares certificate for `f` as weighted squares.
pub fn find_sos(f: &MPoly) -> Result<Outcome<SosCert>> {
    Ok(match find_gram(f)? {
        Outcome::Certified(g) => Outcome::Certified(g.squares()),
        Outcome::Infeasible(r) => Outcome::Infeasible(r),
        Outcome::Unknown(s) => Outcome::Unknown(s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn p(s: &str) -> MPoly {
        parse_poly(s, 2).unwrap()
    }

    #[test]
    fn one_parameter_family() {
        let f = p("2*x^4 + 5*y^4 - x^2*y^2 + 2*x^3*y");
        let v = newton_halved_lattice(&f).unwrap();
        let fam = gram_family(&f, &v).unwrap();
        assert_eq!(fam.dimension(), 1);
        // every member has the shape (2, 1, a; 1, -2a - 1, 0; a, 0, 5)
        for a in [-3i64, 0, 2] {
            let t = fam.g0.get(0, 2).clone();
            let dir = fam.basis[0].get(0, 2).clone();
            let param = (Rat::from(a) - t) / dir;
            let g = fam.member(&[param]);
            let expected = SymMat::from_i64(&[&[2, 1, a], &[1, -2 * a - 1, 0], &[a, 0, 5]]);
            assert_eq!(g, expected);
        }
        assert!(fam.forced.contains_key(&0) && fam.forced.contains_key(&2));
    }

    #[test]
    fn unique_gram_for_square() {
        let f = parse_poly("x^2", 1).unwrap();
        let fam = gram_family(&f, &[vec![1]]).unwrap();
        assert_eq!(fam.dimension(), 0);
        assert_eq!(fam.g0, SymMat::from_i64(&[&[1]]));
        assert_eq!(gram_family(&parse_poly("x^3", 1).unwrap(), &[vec![1]]), Err(Error::NoGram));
    }

    #[test]
    fn motzkin_forced_negative() {
        let f = p("x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1");
        let v = newton_halved_lattice(&f).unwrap();
        let fam = gram_family(&f, &v).unwrap();
        assert_eq!(fam.forced.get(&1), Some(&Rat::from(-3)));
        let out = find_gram(&f).unwrap();
        assert_eq!(
            out,
            Outcome::Infeasible(InfeasibleReason::ForcedNegativeDiagonal { block: 0, index: 1, value: Rat::from(-3) })
        );
    }

    #[test]
    fn finds_gram_for_paper_quartic() {
        let f = p("2*x^4 + 5*y^4 - x^2*y^2 + 2*x^3*y");
        let g = find_gram(&f).unwrap().certified().unwrap();
        assert!(is_psd(&g.gram));
        assert_eq!(g.squares().verify(&f), Ok(()));
    }

    #[test]
    fn quick_obstructions() {
        assert_eq!(find_gram(&p("x^3 + 1")).unwrap(), Outcome::Infeasible(InfeasibleReason::OddDegree));
        let out = find_gram(&p("x^4 - y^4 + 1")).unwrap();
        assert!(matches!(out, Outcome::Infeasible(InfeasibleReason::NewtonVertex { .. })));
        let out = find_gram(&p("x^2*y^4 + x^4 + 1 + 3*x*y^2")).unwrap();
        assert!(out.is_certified() || !out.is_infeasible());
    }

    #[test]
    fn facial_reduction_on_tangent_quartic() {
        let f = p("x^4 + y^4 - 4*x + 3");
        let g = find_gram(&f).unwrap().certified().expect("certificate");
        assert_eq!(verify_gram(&f, &g.gram, &g.monomials), Ok(()));
        assert_eq!(g.squares().verify(&f), Ok(()));
    }

    fn sq(nvars: usize, pairs: &[(Rat, &str)]) -> SosCert {
        SosCert::from_pairs(nvars, pairs.iter().map(|(w, s)| (w.clone(), parse_poly(s, nvars).unwrap())).collect()).unwrap()
    }

    #[test]
    fn two_square_certificate_of_quartic() {
        let f = p("2*x^4 + 5*y^4 - x^2*y^2 + 2*x^3*y");
        let half = crate::arith::rat(1, 2);
        let c = sq(2, &[(half.clone(), "2*x^2 + x*y - 3*y^2"), (half, "3*x*y + y^2")]);
        assert_eq!(verify_sos(&f, &SosCertificate::Squares(c)), Ok(()));
        let bad = sq(2, &[(Rat::from(-1), "x^2")]);
        assert!(verify_sos(&p("-x^4"), &SosCertificate::Squares(bad)).is_err());
    }

    #[test]
    fn motzkin_multiplier_certificates() {
        let m = p("x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1");
        let lifted = &p("1 + x^2") * &m;
        let one = Rat::one();
        let c = sq(2, &[(one.clone(), "1 - x^2*y^2"), (one.clone(), "x - x*y^2"), (one.clone(), "x*y - x^3*y")]);
        assert_eq!(c.verify(&lifted), Ok(()));
        let g = find_gram(&lifted).unwrap().certified().expect("certificate for (1+x^2) f");
        assert_eq!(verify_sos(&lifted, &SosCertificate::Gram(g)), Ok(()));

        let cubed = m.compose(&[p("x^3"), p("y^3")]).unwrap();
        let h = crate::arith::rat(1, 2);
        let q = crate::arith::rat(3, 4);
        let c = SosCert::from_pairs(
            2,
            vec![
                (one.clone(), &p("x^2*y") - &(&p("x^4*y^5") + &p("x^6*y^3")).scale(&h)),
                (one.clone(), &p("x*y^2") - &(&p("x^3*y^6") + &p("x^5*y^4")).scale(&h)),
                (one, &p("1") - &(&p("x^2*y^4") + &p("x^4*y^2")).scale(&h)),
                (q.clone(), p("x^2*y^4 - x^4*y^2")),
                (q.clone(), p("x^3*y^6 - x^5*y^4")),
                (q, p("x^4*y^5 - x^6*y^3")),
            ],
        )
        .unwrap();
        assert_eq!(c.verify(&cubed), Ok(()));
    }
}
