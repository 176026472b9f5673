use ndarray::array;
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;

#[test]
fn real_symmetric_eigh_links() {
    let a: ndarray::Array2<f64> = array![[2.0, 1.0], [1.0, 2.0]];
    let (vals, _vecs) = a.eigh(UPLO::Lower).unwrap();
    assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12);
}

#[test]
fn complex_hermitian_eigh_links() {
    let i = Complex64::new(0.0, 1.0);
    let a: ndarray::Array2<Complex64> = array![
        [Complex64::new(2.0, 0.0), i],
        [-i, Complex64::new(2.0, 0.0)]
    ];
    let (vals, _vecs) = a.eigh(UPLO::Lower).unwrap();
    assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12);
}

#[test]
fn blas_gemm_links() {
    let a = ndarray::Array2::<f64>::eye(64);
    let b = ndarray::Array2::<f64>::from_elem((64, 64), 1.0);
    let c = a.dot(&b);
    assert!((c[[3, 5]] - 1.0).abs() < 1e-15);
}
