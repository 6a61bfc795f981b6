//! Special functions and measure CDFs against statrs as an independent oracle.

use statrs::distribution::{ChiSquared, ContinuousCDF, FisherSnedecor, Normal, StudentsT};
use statrs::function::{beta::beta_reg, gamma};

use cupcheck::measures::{cauchy_1d_cdf, cauchy_radial_cdf, gaussian_radial_cdf, CauchyParams};
use cupcheck::special::{ln_gamma, regularized_beta, regularized_gamma_p, regularized_gamma_q, std_normal_cdf};

fn close(got: f64, want: f64, rtol: f64, atol: f64) -> bool {
    (got - want).abs() <= atol + rtol * want.abs()
}

#[test]
fn ln_gamma_matches() {
    for &x in &[1e-3, 0.1, 0.5, 1.0, 1.5, 2.5, 7.25, 20.0, 171.3, 1e3, 1e5, 1e7] {
        let (got, want) = (ln_gamma(x).unwrap(), gamma::ln_gamma(x));
        assert!(close(got, want, 1e-13, 1e-14), "x = {x}: {got} vs {want}");
    }
}

#[test]
fn incomplete_functions_match() {
    for &(a, b) in &[(0.5, 0.5), (1.0, 3.0), (2.5, 7.0), (40.0, 0.5), (150.0, 200.0)] {
        for i in 1..20 {
            let x = i as f64 / 20.0;
            let (got, want) = (regularized_beta(x, a, b), beta_reg(a, b, x));
            assert!(close(got, want, 1e-11, 1e-14), "I_{x}({a},{b}): {got} vs {want}");
        }
    }
    for &a in &[0.5, 1.0, 3.5, 30.0] {
        for &x in &[0.01, 0.5, 2.0, 10.0, 50.0] {
            let (got, want) = (regularized_gamma_p(a, x), gamma::gamma_lr(a, x));
            assert!(close(got, want, 1e-11, 1e-14), "P({a},{x}): {got} vs {want}");
            let (got, want) = (regularized_gamma_q(a, x), gamma::gamma_ur(a, x));
            assert!(close(got, want, 1e-11, 1e-300), "Q({a},{x}): {got} vs {want}");
        }
    }
    // statrs' normal CDF carries ~1e−10 relative error in the lower tail; tight checks use frozen mpmath values
    let normal = Normal::new(0.0, 1.0).unwrap();
    for i in -300..=80 {
        let x = i as f64 / 10.0;
        assert!(close(std_normal_cdf(x), normal.cdf(x), 1e-9, 1e-15), "Phi({x})");
    }
    for (x, want) in [
        (3.5, 0.99976737092096447),
        (0.5, 0.6914624612740131),
        (-1.0, 0.15865525393145705),
        (-2.5, 0.0062096653257761352),
        (-4.2, 1.3345749015906328e-5),
        (-6.0, 9.8658764503769814e-10),
        (-10.0, 7.6198530241605261e-24),
        (-20.0, 2.7536241186062337e-89),
        (-30.0, 4.9067139271481871e-198),
    ] {
        assert!(close(std_normal_cdf(x), want, 1e-13, 0.0), "Phi({x}) = {}", std_normal_cdf(x));
    }
}

// m_{1,α} is Student t with ν = 2α − 1 degrees of freedom, scaled by 1/√ν
#[test]
fn one_dimensional_cauchy_is_scaled_student_t() {
    for &alpha in &[0.75, 1.0, 3.0, 12.5] {
        let nu: f64 = 2.0 * alpha - 1.0;
        let t = StudentsT::new(0.0, 1.0, nu).unwrap();
        for i in -30..=30 {
            let x = i as f64 / 5.0;
            let (got, want) = (cauchy_1d_cdf(alpha, x), t.cdf(x * nu.sqrt()));
            assert!(close(got, want, 1e-10, 1e-13), "alpha = {alpha}, x = {x}: {got} vs {want}");
        }
    }
}

// |X|² ν / n ~ F(n, ν) under m_{n,α} with ν = 2α − n; |Z|² ~ χ²_n under γ_n
#[test]
fn radial_laws_match() {
    for &(n, alpha) in &[(1usize, 2.0), (2, 3.0), (3, 9.0), (6, 20.0)] {
        let params = CauchyParams::new(n, alpha).unwrap();
        let (nf, nu) = (n as f64, 2.0 * alpha - n as f64);
        let f = FisherSnedecor::new(nf, nu).unwrap();
        let chi = ChiSquared::new(nf).unwrap();
        for i in 1..40 {
            let r = i as f64 / 8.0;
            let want = f.cdf(r * r * nu / nf);
            assert!(close(cauchy_radial_cdf(params, r), want, 1e-9, 1e-12), "cauchy n={n} r={r}");
            assert!(close(gaussian_radial_cdf(n, r), chi.cdf(r * r), 1e-10, 1e-13), "gaussian n={n} r={r}");
        }
    }
}
