//! The locally conformally parallel structure on R^16 \ {0}: metric `g = |x|^-2 g_flat`,
//! Lee form `theta = d(-2 log|x|)`, the conformally scaled 8-form, the Weyl connection,
//! and curvature of the cone over S^15.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::canonical_form::phi_l0;
use crate::error::{Error, Result};
use crate::exterior::{ExteriorForm, MultiIndex};
use crate::hopf::random_unit;
use crate::scalar::Scalar;

/// Reference constant `4` of the relation `R = (4 / s^2)(..)`, reported beside the measured one.
pub const PRINTED_CONE_CONSTANT: f64 = 4.0;
/// Reference constant `c = 1` in `d Phi = c theta ^ Phi`, reported beside the measured one.
pub const PRINTED_LEE_CONSTANT: f64 = 1.0;

fn norm_sqr<T: Scalar>(x: &[T]) -> Result<T> {
    let n2 = x.iter().fold(T::zero(), |acc, v| acc + v.clone() * v.clone());
    if n2.is_zero() {
        return Err(Error::ZeroVector("x"));
    }
    Ok(n2)
}

/// `e^{4 f(x)} Phi_0 = |x|^-8 Phi_0`.
pub fn cone_phi_at<T: Scalar>(phi0: &ExteriorForm<T>, x: &[T]) -> Result<ExteriorForm<T>> {
    if x.len() != phi0.dim() {
        return Err(Error::Dimension(format!("point in R^{} for a form on R^{}", x.len(), phi0.dim())));
    }
    let n2 = norm_sqr(x)?;
    let factor = T::one() / (n2.clone() * n2.clone() * n2.clone() * n2);
    Ok(phi0.scale(&factor))
}

/// `theta_i = -2 x_i / |x|^2`.
pub fn lee_form_at<T: Scalar>(x: &[T]) -> Result<Vec<T>> {
    let n2 = norm_sqr(x)?;
    Ok(x.iter().map(|v| -(T::from_i64(2) * v.clone()) / n2.clone()).collect())
}

/// `f = -2 log|x|`, `g = e^f g_flat`, `theta = df`, with the measured `c` of
/// `d Phi = c theta ^ Phi`.
#[derive(Clone, Debug, Serialize)]
pub struct LeeStructure {
    pub c: f64,
}

impl LeeStructure {
    pub fn measure(samples: usize, seed: u64) -> Result<LeeStructure> {
        Ok(LeeStructure { c: dphi_proportionality(samples, seed)?.c })
    }

    pub fn exponent(x: &[f64]) -> Result<f64> {
        Ok(-norm_sqr(x)?.ln())
    }

    pub fn theta(x: &[f64]) -> Result<Vec<f64>> {
        lee_form_at(x)
    }

    /// `theta^#` for `g`: `|x|^2 theta = -2 x`.
    pub fn lee_vector(x: &[f64]) -> Result<Vec<f64>> {
        let n2 = norm_sqr(x)?;
        Ok(lee_form_at(x)?.iter().map(|t| t * n2).collect())
    }
}

/// `max |d_i theta_j - d_j theta_i|` by central differences.
pub fn lee_curl_fd(x: &[f64], h: f64) -> Result<f64> {
    let n = x.len();
    let mut partial = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[i] += h;
        xm[i] -= h;
        let (tp, tm) = (lee_form_at(&xp)?, lee_form_at(&xm)?);
        for j in 0..n {
            partial[i][j] = (tp[j] - tm[j]) / (2.0 * h);
        }
    }
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((partial[i][j] - partial[j][i]).abs());
        }
    }
    Ok(worst)
}

fn one_form(coeffs: &[f64]) -> ExteriorForm<f64> {
    let n = coeffs.len();
    ExteriorForm::from_terms(n, 1, coeffs.iter().enumerate().map(|(i, &c)| (MultiIndex::from_mask(1 << i), c)))
        .expect("degree-1 terms")
}

/// `d(|x|^-8 Phi_0) = -8 |x|^-10 (sum x_i dx_i) ^ Phi_0`, by the power rule.
pub fn dphi_at(phi0: &ExteriorForm<f64>, x: &[f64]) -> Result<ExteriorForm<f64>> {
    let n2 = norm_sqr(x)?;
    let radial: Vec<f64> = x.iter().map(|v| -8.0 * v / n2.powi(5)).collect();
    one_form(&radial).wedge(phi0)
}

/// The 1-form multiplying `Phi_0` in `d Phi` at unit `|x|`: `-8 sum x_i dx_i`.
pub fn radial_prefactor(x: &[f64]) -> Result<Vec<f64>> {
    let n2 = norm_sqr(x)?;
    Ok(x.iter().map(|v| -8.0 * v / n2.powi(5)).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct ProportionalityReport {
    pub samples: usize,
    pub seed: u64,
    /// Fitted `c` in `d Phi = c theta ^ Phi`.
    pub c: f64,
    /// Worst `|c_J - c| / |c|` over samples and nonzero coefficients `J`.
    pub max_relative_deviation: f64,
    /// Largest `|d Phi_J|` where `(theta ^ Phi)_J` vanishes.
    pub unmatched: f64,
    pub printed_c: f64,
}

fn random_point(rng: &mut impl Rng) -> [f64; 16] {
    let dir = random_unit::<16>(rng);
    let r = rng.random_range(0.5..2.0);
    dir.map(|v| v * r)
}

pub fn dphi_proportionality(samples: usize, seed: u64) -> Result<ProportionalityReport> {
    let phi0 = phi_l0()?.to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c: Option<f64> = None;
    let mut deviation = 0.0f64;
    let mut unmatched = 0.0f64;
    for _ in 0..samples {
        let x = random_point(&mut rng);
        let d = dphi_at(&phi0, &x)?.to_dense();
        let tp = one_form(&lee_form_at(&x)?).wedge(&cone_phi_at(&phi0, &x)?)?.to_dense();
        let scale = tp.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return Err(Error::DegenerateFit("theta ^ Phi vanishes".into()));
        }
        for (a, b) in d.iter().zip(&tp) {
            if b.abs() <= 1e-12 * scale {
                unmatched = unmatched.max(a.abs() / scale);
                continue;
            }
            let cj = a / b;
            let c0 = *c.get_or_insert(cj);
            deviation = deviation.max(((cj - c0) / c0).abs());
        }
    }
    let c = c.ok_or_else(|| Error::DegenerateFit("no samples".into()))?;
    Ok(ProportionalityReport { samples, seed, c, max_relative_deviation: deviation, unmatched, printed_c: PRINTED_LEE_CONSTANT })
}

/// Christoffel symbols `gamma[k][i][j]` of `g = |x|^-2 delta = e^{2 sigma} delta`,
/// `sigma = -log|x|`: `Gamma^k_ij = delta_ik s_j + delta_jk s_i - delta_ij s_k`, `s = d sigma`.
fn levi_civita(x: &[f64]) -> Vec<Vec<Vec<f64>>> {
    let n = x.len();
    let n2: f64 = x.iter().map(|v| v * v).sum();
    let s: Vec<f64> = x.iter().map(|v| -v / n2).collect();
    let mut g = vec![vec![vec![0.0; n]; n]; n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
                g[k][i][j] = d(i, k) * s[j] + d(j, k) * s[i] - d(i, j) * s[k];
            }
        }
    }
    g
}

/// `D_i d_j = (Gamma^k_ij - 1/2 (theta_i delta_jk + theta_j delta_ik - g_ij B^k)) d_k`,
/// with `B = theta^#` for `g`, and `theta_scale` multiplying theta.
fn weyl_symbols(x: &[f64], theta_scale: f64) -> Vec<Vec<Vec<f64>>> {
    let n = x.len();
    let n2: f64 = x.iter().map(|v| v * v).sum();
    let theta: Vec<f64> = x.iter().map(|v| -2.0 * v / n2 * theta_scale).collect();
    let metric = 1.0 / n2;
    let sharp: Vec<f64> = theta.iter().map(|t| t / metric).collect();
    let mut out = levi_civita(x);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
                out[k][i][j] -= 0.5 * (theta[i] * d(j, k) + theta[j] * d(i, k) - metric * d(i, j) * sharp[k]);
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylReport {
    pub samples: usize,
    pub seed: u64,
    pub torsion: f64,
    /// `max |(D_k g)_ij - theta_k g_ij|` with analytic metric derivatives.
    pub weyl_condition: f64,
    /// The same with central-difference metric derivatives at `fd_step`.
    pub weyl_condition_fd: f64,
    pub fd_step: f64,
    /// Largest connection coefficient of `D` in the flat chart.
    pub max_weyl_symbol: f64,
}

pub fn weyl_check(samples: usize, seed: u64, fd_step: f64) -> Result<WeylReport> {
    weyl_check_scaled(samples, seed, fd_step, 1.0)
}

/// `theta_scale = 0` replaces theta by zero in the connection (negative control).
pub fn weyl_check_scaled(samples: usize, seed: u64, fd_step: f64, theta_scale: f64) -> Result<WeylReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut torsion, mut weyl, mut weyl_fd, mut max_sym) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let metric = |p: &[f64]| 1.0 / p.iter().map(|v| v * v).sum::<f64>();
    for _ in 0..samples {
        let x = random_point(&mut rng);
        let n = x.len();
        let gam = weyl_symbols(&x, theta_scale);
        let theta = lee_form_at(&x)?;
        let gx = metric(&x);
        let n2: f64 = x.iter().map(|v| v * v).sum();
        for k in 0..n {
            // d_k of the conformal factor, analytic and by central differences
            let analytic = -2.0 * x[k] / (n2 * n2);
            let mut xp = x;
            let mut xm = x;
            xp[k] += fd_step;
            xm[k] -= fd_step;
            let numeric = (metric(&xp) - metric(&xm)) / (2.0 * fd_step);
            for i in 0..n {
                for j in 0..n {
                    torsion = torsion.max((gam[k][i][j] - gam[k][j][i]).abs());
                    max_sym = max_sym.max(gam[k][i][j].abs());
                    // (D_k g)_ij = d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il, with g = gx delta
                    let d = if i == j { 1.0 } else { 0.0 };
                    let conn = gam[j][k][i] * gx + gam[i][k][j] * gx;
                    let target = theta[k] * gx * d;
                    weyl = weyl.max((analytic * d - conn - target).abs());
                    weyl_fd = weyl_fd.max((numeric * d - conn - target).abs());
                }
            }
        }
    }
    Ok(WeylReport { samples, seed, torsion, weyl_condition: weyl, weyl_condition_fd: weyl_fd, fd_step, max_weyl_symbol: max_sym })
}

type Metric<'a> = &'a dyn Fn(&[f64]) -> DMatrix<f64>;

/// `gamma[l][i][j] = Gamma^l_ij` from central differences of the metric.
pub fn christoffel_fd(metric: Metric, p: &[f64], h: f64) -> Vec<Vec<Vec<f64>>> {
    let n = p.len();
    let dg: Vec<DMatrix<f64>> = (0..n)
        .map(|k| {
            let mut pp = p.to_vec();
            let mut pm = p.to_vec();
            pp[k] += h;
            pm[k] -= h;
            (metric(&pp) - metric(&pm)) / (2.0 * h)
        })
        .collect();
    let inv = metric(p).try_inverse().unwrap_or_else(|| DMatrix::zeros(n, n));
    let mut out = vec![vec![vec![0.0; n]; n]; n];
    for i in 0..n {
        for j in i..n {
            let lowered: Vec<f64> = (0..n).map(|m| 0.5 * (dg[i][(m, j)] + dg[j][(m, i)] - dg[m][(i, j)])).collect();
            for l in 0..n {
                let v: f64 = (0..n).map(|m| inv[(l, m)] * lowered[m]).sum();
                out[l][i][j] = v;
                out[l][j][i] = v;
            }
        }
    }
    out
}

/// `R(d_i, d_j) d_k = R[l][k][i][j] d_l` with
/// `R(X, Y) Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z`.
pub fn riemann_fd(metric: Metric, p: &[f64], h: f64) -> Vec<Vec<Vec<Vec<f64>>>> {
    let n = p.len();
    let gam = christoffel_fd(metric, p, h);
    let dgam: Vec<Vec<Vec<Vec<f64>>>> = (0..n)
        .map(|i| {
            let mut pp = p.to_vec();
            let mut pm = p.to_vec();
            pp[i] += h;
            pm[i] -= h;
            let (a, b) = (christoffel_fd(metric, &pp, h), christoffel_fd(metric, &pm, h));
            (0..n).map(|l| (0..n).map(|j| (0..n).map(|k| (a[l][j][k] - b[l][j][k]) / (2.0 * h)).collect()).collect()).collect()
        })
        .collect();
    let mut r = vec![vec![vec![vec![0.0; n]; n]; n]; n];
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut v = dgam[i][l][j][k] - dgam[j][l][i][k];
                    for m in 0..n {
                        v += gam[l][i][m] * gam[m][j][k] - gam[l][j][m] * gam[m][i][k];
                    }
                    r[l][k][i][j] = v;
                }
            }
        }
    }
    r
}

/// Least-squares `kappa` in `R(X, Y) Z = kappa (g(Y, Z) X - g(X, Z) Y)` and the worst
/// componentwise misfit.
pub fn constant_curvature_fit(r: &[Vec<Vec<Vec<f64>>>], g: &DMatrix<f64>) -> (f64, f64) {
    let n = g.nrows();
    let model = |l: usize, k: usize, i: usize, j: usize| {
        (if l == i { g[(j, k)] } else { 0.0 }) - (if l == j { g[(i, k)] } else { 0.0 })
    };
    let (mut num, mut den) = (0.0, 0.0);
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let t = model(l, k, i, j);
                    num += r[l][k][i][j] * t;
                    den += t * t;
                }
            }
        }
    }
    let kappa = num / den;
    let mut misfit = 0.0f64;
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    misfit = misfit.max((r[l][k][i][j] - kappa * model(l, k, i, j)).abs());
                }
            }
        }
    }
    (kappa, misfit)
}

/// Round metric of the unit sphere in stereographic coordinates.
pub fn sphere_metric(y: &[f64]) -> DMatrix<f64> {
    let n2: f64 = y.iter().map(|v| v * v).sum();
    DMatrix::identity(y.len(), y.len()) * (4.0 / ((1.0 + n2) * (1.0 + n2)))
}

/// `ds^2 + s^2 g_sphere` in coordinates `(s, y)`.
pub fn cone_metric(p: &[f64]) -> DMatrix<f64> {
    let n = p.len();
    let mut g = DMatrix::zeros(n, n);
    g[(0, 0)] = 1.0;
    let s = sphere_metric(&p[1..]) * (p[0] * p[0]);
    g.view_mut((1, 1), (n - 1, n - 1)).copy_from(&s);
    g
}

/// `(s, y) -> s * sigma^-1(y)` into flat R^n.
pub fn cone_to_flat(p: &[f64]) -> Vec<f64> {
    let y = &p[1..];
    let n2: f64 = y.iter().map(|v| v * v).sum();
    let mut out: Vec<f64> = y.iter().map(|v| p[0] * 2.0 * v / (1.0 + n2)).collect();
    out.push(p[0] * (n2 - 1.0) / (n2 + 1.0));
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeReport {
    pub samples: usize,
    pub seed: u64,
    pub step: f64,
    /// Largest Riemann component of the cone metric.
    pub max_curvature: f64,
    /// Sectional curvature fitted on the round S^15.
    pub kappa: f64,
    pub kappa_misfit: f64,
    /// `s^2` times the curvature constant of the slice `{s} x S^15` with metric `s^2 g`.
    pub implied_constant: f64,
    pub printed_constant: f64,
    /// `max |J^T J - G|` for the chart into flat R^16.
    pub chart_residual: f64,
}

pub fn cone_flatness_check(samples: usize, seed: u64, step: f64) -> Result<ConeReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ConeReport {
        samples,
        seed,
        step,
        max_curvature: 0.0,
        kappa: 0.0,
        kappa_misfit: 0.0,
        implied_constant: 0.0,
        printed_constant: PRINTED_CONE_CONSTANT,
        chart_residual: 0.0,
    };
    let mut worst_kappa_err = -1.0f64;
    let mut worst_implied_err = -1.0f64;
    for _ in 0..samples {
        let s: f64 = rng.random_range(0.5..2.0);
        let y: Vec<f64> = (0..15).map(|_| rng.random_range(-0.5..0.5)).collect();
        let p: Vec<f64> = std::iter::once(s).chain(y.iter().copied()).collect();

        let r = riemann_fd(&cone_metric, &p, step);
        let flat = r.iter().flatten().flatten().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        report.max_curvature = report.max_curvature.max(flat);

        let rs = riemann_fd(&sphere_metric, &y, step);
        let (kappa, misfit) = constant_curvature_fit(&rs, &sphere_metric(&y));
        report.kappa_misfit = report.kappa_misfit.max(misfit);
        if (kappa - 1.0).abs() > worst_kappa_err {
            worst_kappa_err = (kappa - 1.0).abs();
            report.kappa = kappa;
        }

        let slice = |z: &[f64]| sphere_metric(z) * (s * s);
        let rslice = riemann_fd(&slice, &y, step);
        let (k_slice, _) = constant_curvature_fit(&rslice, &slice(&y));
        let implied = k_slice * s * s;
        if (implied - 1.0).abs() > worst_implied_err {
            worst_implied_err = (implied - 1.0).abs();
            report.implied_constant = implied;
        }

        let jac = DMatrix::from_fn(16, 16, |a, b| {
            let mut pp = p.clone();
            let mut pm = p.clone();
            pp[b] += step;
            pm[b] -= step;
            (cone_to_flat(&pp)[a] - cone_to_flat(&pm)[a]) / (2.0 * step)
        });
        let pulled = jac.transpose() * jac;
        report.chart_residual = report.chart_residual.max((pulled - cone_metric(&p)).amax());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};

    #[test]
    fn cone_phi_scaling_is_exact() {
        let phi = ExteriorForm::<Rational>::basis(16, &[0, 1, 2, 3, 4, 5, 6, 7]).unwrap();
        let e1: Vec<Rational> = (0..16).map(|i| rational((i == 0) as i64, 1)).collect();
        assert_eq!(cone_phi_at(&phi, &e1).unwrap(), phi);
        let x: Vec<Rational> = (0..16).map(|i| rational(i as i64 % 3 - 1, 2)).collect();
        let x2: Vec<Rational> = x.iter().map(|v| v * rational(2, 1)).collect();
        let a = cone_phi_at(&phi, &x).unwrap();
        let b = cone_phi_at(&phi, &x2).unwrap();
        assert_eq!(a.scale(&rational(1, 256)), b);
        let two_e1: Vec<Rational> = e1.iter().map(|v| v * rational(2, 1)).collect();
        assert_eq!(cone_phi_at(&phi, &two_e1).unwrap(), phi.scale(&rational(1, 256)));
        assert!(matches!(cone_phi_at(&phi, &vec![rational(0, 1); 16]), Err(Error::ZeroVector(_))));
    }

    #[test]
    fn lee_form_values() {
        let mut e1 = vec![0.0; 16];
        e1[0] = 1.0;
        let t = lee_form_at(&e1).unwrap();
        assert_eq!(t[0], -2.0);
        assert!(t[1..].iter().all(|v| *v == 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = random_point(&mut rng);
            let th = lee_form_at(&x).unwrap();
            let pairing: f64 = th.iter().zip(&x).map(|(a, b)| a * b).sum();
            assert!((pairing + 2.0).abs() < 1e-14);
            assert!(lee_curl_fd(&x, 1e-5).unwrap() <= 1e-8);
        }
    }

    #[test]
    fn lee_structure() {
        let x: Vec<f64> = (0..16).map(|i| (i as f64 - 7.5) / 4.0).collect();
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let theta = LeeStructure::theta(&x).unwrap();
        let radial: f64 = theta.iter().zip(&x).map(|(t, v)| t * v / r).sum();
        assert!((radial + 2.0 / r).abs() < 1e-14);
        for (b, v) in LeeStructure::lee_vector(&x).unwrap().iter().zip(&x) {
            assert!((b + 2.0 * v).abs() < 1e-13);
        }
        assert!((LeeStructure::exponent(&x).unwrap() + 2.0 * r.ln()).abs() < 1e-14);
        assert!((LeeStructure::measure(3, 1).unwrap().c - 4.0).abs() < 1e-9);
    }

    #[test]
    fn radial_prefactor_at_unit_norm() {
        let x = random_unit::<16>(&mut ChaCha8Rng::seed_from_u64(5));
        let p = radial_prefactor(&x).unwrap();
        for (a, b) in p.iter().zip(&x) {
            assert!((a + 8.0 * b).abs() < 1e-13);
        }
    }

    #[test]
    fn weyl_connection_is_flat_and_weyl() {
        let rep = weyl_check(10, 1, 1e-4).unwrap();
        assert!(rep.torsion <= 1e-12);
        assert!(rep.weyl_condition <= 1e-9);
        assert!(rep.max_weyl_symbol <= 1e-12, "{rep:?}");
        let neg = weyl_check_scaled(10, 1, 1e-4, 0.0).unwrap();
        assert!(neg.weyl_condition > 1e-3);
    }

    #[test]
    fn fd_errors_shrink_quadratically() {
        let a = weyl_check(5, 2, 1e-2).unwrap().weyl_condition_fd;
        let b = weyl_check(5, 2, 1e-3).unwrap().weyl_condition_fd;
        assert!(b < a / 50.0, "{a} {b}");
    }

    #[test]
    fn two_sphere_curvature() {
        let y = [0.2, -0.3];
        let r = riemann_fd(&sphere_metric, &y, 1e-4);
        let (k, misfit) = constant_curvature_fit(&r, &sphere_metric(&y));
        assert!((k - 1.0).abs() < 1e-6 && misfit < 1e-6);
    }
}
