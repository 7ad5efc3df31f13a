//! Estimator and DTW outputs checked against values frozen from an
//! independent dense-linear-algebra implementation.

use approx::assert_relative_eq;
use nalgebra::DMatrix;

use tsmetric::covariance::{
    diagonal_covariance, estimate_shrink_intensity, pseudo_inverse, sample_covariance, shrinkage_covariance,
};
use tsmetric::metric::{metric_from_covariance, MetricForm};
use tsmetric::{
    dtw_distance, validate_dataset, ClassLabel, DtwConfig, LabeledDataset, MetricEstimator, Normalization,
    TimeSeries,
};

const X: [[f64; 5]; 30] = [
    [-0.211, -0.35150000000000003, 2.075, -1.667, 4.284],
    [-0.322, -0.935, 2.049, -0.984, 3.842],
    [-0.731, 0.7224999999999999, 2.221, -1.2289999999999999, 3.067],
    [-1.47, -2.7800000000000002, 2.16, 11.132000000000001, 4.229],
    [0.035, -0.6825, 2.098, 1.9180000000000001, 4.24],
    [-0.203, 2.4075, 2.101, 2.2909999999999995, 3.592],
    [0.756, 2.5839999999999996, 2.848, -8.053999999999998, 4.874],
    [-1.024, -2.273, 1.991, 3.0140000000000002, 2.805],
    [-0.506, -0.404, 1.048, 1.187, 3.854],
    [-0.132, -0.523, 1.998, 2.5060000000000002, 5.173],
    [-0.809, -0.09549999999999992, 1.755, 5.755, 3.028],
    [0.877, -0.0754999999999999, 1.317, 1.5059999999999998, 4.092],
    [-1.521, -2.2895, 1.998, 7.4719999999999995, 4.876],
    [0.784, 2.842, 2.457, 0.1349999999999998, 2.891],
    [2.185, 4.1795, 1.697, -3.559, 3.511],
    [0.627, -0.4625, 2.363, 0.133, 4.376],
    [-0.213, -0.3225, 2.077, 1.919, 3.228],
    [0.395, 5.4545, 1.501, -4.4430000000000005, 5.082],
    [-1.12, -0.30000000000000027, 2.262, 0.8670000000000005, 5.079],
    [0.878, 5.714, 2.195, -5.590000000000001, 5.812],
    [0.203, 0.3045, 1.275, 3.25, 2.733],
    [1.098, 2.9410000000000003, 2.406, -2.3940000000000006, 5.238],
    [-0.456, 0.41600000000000004, 2.7, -1.6070000000000002, 4.193],
    [0.975, 0.3354999999999999, 1.65, -1.4209999999999998, 5.181],
    [-0.189, 0.08650000000000002, 1.294, -0.36400000000000005, 4.927],
    [-0.189, -0.08549999999999996, 2.396, 0.4529999999999999, 5.613],
    [-0.368, -0.5780000000000001, 1.867, 4.268000000000001, 4.701],
    [-0.699, -1.6965, 2.019, 7.41, 4.877],
    [-0.477, 2.2185, 1.49, 2.7199999999999998, 2.908],
    [-0.086, 1.262, 2.507, 4.857, 4.049],
];
const LAMBDA: f64 = 0.12615669588283882;
const S: [f64; 25] = [
    0.680654874712644,
    1.2034015408045982,
    -0.0069829597701149635,
    -2.231992329885057,
    0.09566304022988507,
    1.2034015408045982,
    4.47687871867816,
    0.04700555459770105,
    -5.985392095977013,
    0.22730910632183915,
    -0.0069829597701149635,
    0.04700555459770105,
    0.19105448850574716,
    -0.2991856954022987,
    0.08188141954022993,
    -2.231992329885057,
    -5.985392095977013,
    -0.2991856954022987,
    16.25521251609196,
    -0.9072375574712643,
    0.09566304022988507,
    0.22730910632183915,
    0.08188141954022993,
    -0.9072375574712643,
    0.8112858678160917,
];
const SHRUNK: [f64; 25] = [
    0.680654874712644,
    1.0515843785963728,
    -0.006102012638034472,
    -1.950411552310919,
    0.08359450715637569,
    1.0515843785963728,
    4.47687871867816,
    0.0410754891415147,
    -5.230294805585293,
    0.19863254052419502,
    -0.006102012638034472,
    0.0410754891415147,
    0.19105448850574716,
    -0.26144141661493525,
    0.071551530196838,
    -1.950411552310919,
    -5.230294805585293,
    -0.26144141661493525,
    16.25521251609196,
    -0.7927834648398725,
    0.08359450715637569,
    0.19863254052419502,
    0.071551530196838,
    -0.7927834648398725,
    0.8112858678160917,
];
const M_SHRINK_UNIT: [f64; 25] = [
    3.160064413238179,
    -0.47191693605355756,
    0.5338087964020238,
    0.23454384551095542,
    -0.027953551141519282,
    -0.47191693605355745,
    0.49885983610285756,
    0.0113024799840055,
    0.10546400127497672,
    0.028548844008186604,
    0.533808796402024,
    0.011302479984005392,
    6.643328851291145,
    0.150305403123033,
    -0.49680297191424744,
    0.23454384551095583,
    0.10546400127497663,
    0.15030540312303306,
    0.1414567794632148,
    0.07498571945083729,
    -0.027953551141518998,
    0.028548844008186556,
    -0.49680297191424744,
    0.07498571945083732,
    1.5817632333029488,
];
const M_SHRINK_RAW: [f64; 25] = [
    2.651946944227035,
    -0.3960358121984552,
    0.44797587052006715,
    0.19683074553301994,
    -0.02345880489634779,
    -0.39603581219845513,
    0.4186464720176132,
    0.009485115914158251,
    0.08850608700742656,
    0.023958378605056105,
    0.4479758705200673,
    0.009485115914158161,
    5.575125485693373,
    0.12613728784866282,
    -0.4169203379942611,
    0.1968307455330203,
    0.08850608700742647,
    0.12613728784866288,
    0.11871146438222792,
    0.06292851143326535,
    -0.02345880489634755,
    0.023958378605056063,
    -0.4169203379942611,
    0.06292851143326536,
    1.3274261611490337,
];
const W_DIAG_UNIT: [f64; 5] = [
    2.208606062983134,
    0.33579164805546347,
    7.868427980136933,
    0.09248101072816922,
    1.8529824599756861,
];
const PINV_RANK: usize = 2;
const PINV_UNIT: [f64; 25] = [
    0.08398427502722569,
    0.04510095234232287,
    -0.008207708250297511,
    -0.2292656112060903,
    0.2455560346709266,
    0.04510095234232287,
    0.7111686165071944,
    0.04390891896180878,
    -0.6213723423042754,
    0.2858790550009694,
    -0.008207708250297511,
    0.04390891896180878,
    0.004200483996622413,
    -0.012638738223611345,
    -0.013165567958425288,
    -0.22926561120609026,
    -0.6213723423042754,
    -0.012638738223611345,
    0.9872532157439992,
    -0.7820409491703009,
    0.2455560346709266,
    0.2858790550009694,
    -0.013165567958425288,
    -0.7820409491703009,
    0.7524937434460413,
];
const D_SHRINK_UNIT_0_3: f64 = 14.286682213125937;
const SERIES_A: [f64; 12] = [
    0.0, 0.479, 0.841, 0.997, 0.909, 0.598, 0.141, -0.351, -0.757, -0.978, -0.959, -0.706,
];
const SERIES_B: [f64; 9] = [1.0, 0.832, 0.384, -0.193, -0.705, -0.98, -0.926, -0.56, -0.007];
const DTW_AB: f64 = 1.3421501406325596;
const DTW_AB_BAND3: f64 = 1.4631291808996223;
const DTW_AB_BAND8: f64 = 1.3421501406325596;

fn dataset() -> LabeledDataset {
    validate_dataset(X.iter().map(|r| (r.to_vec(), ClassLabel(1)))).unwrap()
}

fn assert_matrix(got: &DMatrix<f64>, want: &[f64], tol: f64) {
    let n = got.nrows();
    assert_eq!(want.len(), n * n);
    for i in 0..n {
        for j in 0..n {
            assert_relative_eq!(got[(i, j)], want[i * n + j], epsilon = tol, max_relative = tol);
        }
    }
}

#[test]
fn sample_covariance_matches() {
    assert_matrix(&sample_covariance(&dataset()).unwrap().to_dense(), &S, 1e-12);
}

#[test]
fn shrinkage_intensity_and_matrix_match() {
    let d = dataset();
    assert_relative_eq!(
        estimate_shrink_intensity(&d).unwrap(),
        LAMBDA,
        max_relative = 1e-12
    );
    let c = shrinkage_covariance(&d).unwrap();
    assert_relative_eq!(c.shrink_intensity.unwrap(), LAMBDA, max_relative = 1e-12);
    assert_matrix(&c.to_dense(), &SHRUNK, 1e-12);
}

#[test]
fn shrinkage_metrics_match() {
    let c = shrinkage_covariance(&dataset()).unwrap();
    let unit =
        metric_from_covariance(&c, MetricEstimator::Shrinkage, Normalization::UnitDeterminant).unwrap();
    assert_matrix(&unit.to_dense(), &M_SHRINK_UNIT, 1e-10);
    let raw = metric_from_covariance(&c, MetricEstimator::Shrinkage, Normalization::RawInverse).unwrap();
    assert_matrix(&raw.to_dense(), &M_SHRINK_RAW, 1e-10);
    let q = TimeSeries::new(X[0].to_vec()).unwrap();
    let t = TimeSeries::new(X[3].to_vec()).unwrap();
    assert_relative_eq!(
        unit.distance(&q, &t).unwrap(),
        D_SHRINK_UNIT_0_3,
        max_relative = 1e-10
    );
}

#[test]
fn diagonal_metric_matches() {
    let c = diagonal_covariance(&dataset()).unwrap();
    let m = metric_from_covariance(&c, MetricEstimator::Diagonal, Normalization::UnitDeterminant).unwrap();
    let MetricForm::Diagonal(w) = m.form() else {
        panic!("diagonal estimator must give a diagonal form");
    };
    for (got, want) in w.iter().zip(W_DIAG_UNIT) {
        assert_relative_eq!(*got, want, max_relative = 1e-12);
    }
}

#[test]
fn pseudo_inverse_matches() {
    let few = validate_dataset(X[..3].iter().map(|r| (r.to_vec(), ClassLabel(1)))).unwrap();
    let p = pseudo_inverse(&sample_covariance(&few).unwrap(), None).unwrap();
    assert_eq!(p.rank, PINV_RANK);
    assert_matrix(&p.matrix, &PINV_UNIT, 1e-9);
}

#[test]
fn dtw_matches() {
    let a = TimeSeries::new(SERIES_A.to_vec()).unwrap();
    let b = TimeSeries::new(SERIES_B.to_vec()).unwrap();
    for (cfg, want) in [
        (DtwConfig::unconstrained(), DTW_AB),
        (DtwConfig::with_band(3), DTW_AB_BAND3),
        (DtwConfig::with_band(8), DTW_AB_BAND8),
    ] {
        assert_relative_eq!(dtw_distance(&a, &b, cfg).unwrap(), want, max_relative = 1e-12);
        assert_relative_eq!(dtw_distance(&b, &a, cfg).unwrap(), want, max_relative = 1e-12);
    }
}
