use num_complex::Complex64;
use podles::action::*;
use podles::params::*;

fn main() {
    let a = 2.0f64;
    let m = CutoffMeasure::GaussianDensity { a };
    let ctl = SeriesControl::default();
    let eta = QParams::new(0.5, 1.0).unwrap().eta();
    // brute trapezoid oracle in v = ln s over [-60, 3], step 1e-4
    let brute = |alpha: Complex64, k: u8| -> Complex64 {
        let n = 1_200_000usize;
        let (v0, v1) = (-60.0f64, 3.0f64);
        let h = (v1 - v0) / n as f64;
        let mut sum = Complex64::new(0.0, 0.0);
        for i in 0..=n {
            let v = v0 + h * i as f64;
            let s = v.exp();
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            // integrand in s times ds = s dv
            let f = ((1.0 - alpha) * v).exp() * v.powi(k as i32) * (-a * s * s).exp();
            sum += w * f;
        }
        (4.0 * a / std::f64::consts::PI).sqrt() * sum * h
    };
    for alpha in [
        Complex64::new(0.0, 0.0),
        Complex64::new(-2.0, 0.0),
        Complex64::new(0.0, eta),
        Complex64::new(-2.0, -eta),
    ] {
        for k in 0..=2u8 {
            let mine = moment(&m, alpha, k, &ctl).unwrap();
            let oracle = brute(alpha, k);
            println!(
                "alpha={alpha:.4} k={k}: mine {mine:.8e} oracle {oracle:.8e} diff {:.2e}",
                (mine - oracle).norm()
            );
        }
    }
}
