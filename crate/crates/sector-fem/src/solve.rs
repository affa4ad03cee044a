use crate::error::{FemError, Result};
use crate::field::ScalarField;
use crate::nonlinearity::NonlinearitySpec;
use crate::space::{dot, matvec, norm, Coefficient, Factor, FemSpace};
use serde::{Deserialize, Serialize};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_NEWTON: usize = 50;
pub const EIGEN_TOL: f64 = 1e-8;
pub const EIGEN_MAX_ITER: usize = 500;
/// Halvings of the Newton step before the iteration is declared divergent.
const MAX_HALVINGS: usize = 40;

/// Options of [`solve_semilinear`].
#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    /// Bound on the Euclidean norm of the free weak-form residual.
    pub tol: f64,
    pub max_newton: usize,
    /// Nodal initial guess; defaults to the `const(1)` solution, or zero for affine `f`.
    pub initial: Option<Vec<f64>>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, max_newton: DEFAULT_MAX_NEWTON, initial: None }
    }
}

/// Outcome of a Newton solve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub newton_iterations: usize,
    pub residual: f64,
    /// Residual norm before the first step and after each step.
    pub residual_history: Vec<f64>,
    /// Minimum nodal value off the Dirichlet arc.
    pub min_interior: f64,
    pub positive: bool,
    pub damping_events: usize,
}

/// Weak-form residual `∫∇u·∇φ − ∫f(u)φ` on free vertices.
fn residual(space: &FemSpace, k: &faer::sparse::SparseColMat<usize, f64>, f: &NonlinearitySpec, u: &[f64]) -> Vec<f64> {
    let nodal = space.expand(u, |_| 0.0);
    let b = space.load(|_, a, c| f.f(0.5 * (nodal[a] + nodal[c])));
    let mut r = matvec(k, u);
    for (ri, bi) in r.iter_mut().zip(&b) {
        *ri -= bi;
    }
    r
}

/// Solves `Δu + f(u) = 0` with `u = 0` on the arc and zero normal derivative on the rays by
/// damped Newton iteration.
pub fn solve_semilinear(
    space: &FemSpace,
    fspec: &NonlinearitySpec,
    opts: &SolveOptions,
) -> Result<(ScalarField, SolveReport)> {
    fspec.validate()?;
    let (k, _) = space.operator(None);
    let mut u = match &opts.initial {
        Some(init) => {
            if init.len() != space.mesh().n_vertices() {
                return Err(FemError::InvalidInput("initial guess length differs from vertex count".into()));
            }
            space.restrict(init)
        }
        None => initial_guess(space, &k, fspec)?,
    };
    let mut r = residual(space, &k, fspec, &u);
    let mut rn = norm(&r);
    let mut history = vec![rn];
    let mut damping_events = 0;
    let mut steps = 0;
    while rn > opts.tol {
        if steps == opts.max_newton {
            return Err(FemError::Divergence { iterations: steps, residual: rn });
        }
        let jac = jacobian(space, fspec, &space.expand(&u, |_| 0.0));
        let delta = Factor::new(&jac)?.solve(&r)?;
        let mut t = 1.0;
        let mut halvings = 0;
        loop {
            let trial: Vec<f64> = u.iter().zip(&delta).map(|(a, d)| a - t * d).collect();
            let rt = residual(space, &k, fspec, &trial);
            let rtn = norm(&rt);
            if rtn.is_finite() && (rtn < rn || rtn <= opts.tol) {
                u = trial;
                r = rt;
                rn = rtn;
                break;
            }
            halvings += 1;
            damping_events += 1;
            if halvings > MAX_HALVINGS {
                return Err(FemError::Divergence { iterations: steps, residual: rn });
            }
            t *= 0.5;
        }
        steps += 1;
        history.push(rn);
    }
    let field = ScalarField::new(space.mesh().clone(), space.expand(&u, |_| 0.0))?;
    let min_interior = field.min_interior();
    let report = SolveReport {
        newton_iterations: steps,
        residual: rn,
        residual_history: history,
        min_interior,
        positive: min_interior > 0.0,
        damping_events,
    };
    Ok((field, report))
}

/// Jacobian `∫∇δ·∇φ − ∫f′(u)δφ`, with `f′` sampled at edge midpoints.
fn jacobian(space: &FemSpace, fspec: &NonlinearitySpec, nodal: &[f64]) -> faer::sparse::SparseColMat<usize, f64> {
    space
        .operator_with(|t, k| {
            let n = space.elements[t].nodes;
            fspec.df(0.5 * (nodal[n[k]] + nodal[n[(k + 1) % 3]]))
        })
        .0
}

/// Zero for affine `f`, where one Newton step is exact; otherwise the `const(1)` solution,
/// rescaled onto the Nehari manifold for superlinear powers.
fn initial_guess(
    space: &FemSpace,
    k: &faer::sparse::SparseColMat<usize, f64>,
    fspec: &NonlinearitySpec,
) -> Result<Vec<f64>> {
    if space.n_free() == 0 || fspec.is_affine() {
        return Ok(vec![0.0; space.n_free()]);
    }
    let b = space.load(|_, _, _| 1.0);
    let w = Factor::new(k)?.solve(&b)?;
    if let NonlinearitySpec::Power { c, p } = *fspec {
        if c > 0.0 && p > 1.0 {
            let nodal = space.expand(&w, |_| 0.0);
            let energy = dot(&w, &matvec(k, &w));
            let moment: f64 = space
                .load(|_, a, b| (0.5 * (nodal[a] + nodal[b])).abs().powf(p))
                .iter()
                .zip(&w)
                .map(|(x, y)| x * y)
                .sum();
            if moment > 0.0 {
                let t = (energy / (c * moment)).powf(1.0 / (p - 1.0));
                return Ok(w.into_iter().map(|x| t * x).collect());
            }
        }
    }
    Ok(w)
}

/// Data of the linear problem `Δu + c u = s` with `u = g` on the arc and `∂u/∂ν = q` on the rays.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProblem {
    pub c: Coefficient,
    pub source: Coefficient,
    pub dirichlet: Coefficient,
    pub neumann: Coefficient,
}

impl Default for LinearProblem {
    fn default() -> Self {
        Self {
            c: Coefficient::Constant(0.0),
            source: Coefficient::Constant(0.0),
            dirichlet: Coefficient::Constant(0.0),
            neumann: Coefficient::Constant(0.0),
        }
    }
}

pub fn solve_linear(space: &FemSpace, problem: &LinearProblem) -> Result<ScalarField> {
    let mesh = space.mesh().clone();
    for coef in [&problem.c, &problem.source, &problem.dirichlet, &problem.neumann] {
        coef.check(&mesh)?;
    }
    if matches!(problem.dirichlet, Coefficient::Element(_)) || matches!(problem.neumann, Coefficient::Element(_)) {
        return Err(FemError::InvalidInput("boundary data must be constant or nodal".into()));
    }
    let (a, coupling) = space.operator(Some(&problem.c));
    let mut rhs = space.load(|t, x, y| -problem.source.at_edge_midpoint(t, x, y));
    for (r, q) in rhs.iter_mut().zip(space.neumann_load(&problem.neumann)) {
        *r += q;
    }
    for trip in &coupling {
        rhs[trip.row] -= trip.val * problem.dirichlet.at_vertex(trip.col);
    }
    let u = if space.n_free() == 0 { Vec::new() } else { Factor::new(&a)?.solve(&rhs)? };
    ScalarField::new(mesh, space.expand(&u, |v| problem.dirichlet.at_vertex(v)))
}

/// Principal eigenpair of `−Δ` with the mixed conditions.
#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub value: f64,
    /// Normalized to maximum 1.
    pub field: ScalarField,
    pub iterations: usize,
}

/// Smallest eigenvalue of the discrete mixed Laplacian by inverse iteration with Rayleigh
/// quotients, stopped at relative change below [`EIGEN_TOL`].
pub fn principal_eigenvalue(space: &FemSpace) -> Result<Eigenpair> {
    let n = space.n_free();
    if n == 0 {
        return Err(FemError::InvalidInput("mesh has no free vertices".into()));
    }
    let (k, _) = space.operator(None);
    let m = space.mass();
    let lu = Factor::new(&k)?;
    let mut x = vec![1.0; n];
    let mut lambda = f64::INFINITY;
    for it in 1..=EIGEN_MAX_ITER {
        let mut y = lu.solve(&matvec(&m, &x))?;
        let my = matvec(&m, &y);
        let mnorm = dot(&y, &my).sqrt();
        y.iter_mut().for_each(|v| *v /= mnorm);
        let next = dot(&y, &matvec(&k, &y));
        let change = (next - lambda).abs();
        let vec_change = norm(&y.iter().zip(&x).map(|(a, b)| a - b).collect::<Vec<_>>()) / norm(&y);
        x = y;
        lambda = next;
        if change <= EIGEN_TOL * lambda && vec_change <= EIGEN_TOL.sqrt() {
            let mut nodal = space.expand(&x, |_| 0.0);
            let peak = nodal.iter().copied().fold(0.0f64, |acc, v| if v.abs() > acc.abs() { v } else { acc });
            nodal.iter_mut().for_each(|v| *v /= peak);
            let field = ScalarField::new(space.mesh().clone(), nodal)?;
            return Ok(Eigenpair { value: lambda, field, iterations: it });
        }
    }
    Err(FemError::NoConvergence(EIGEN_MAX_ITER))
}
