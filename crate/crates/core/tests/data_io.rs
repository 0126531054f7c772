use std::fs;
use std::path::Path;

use extrinsic_pca::engine::run_epca;
use extrinsic_pca::error::EpcaError;
use extrinsic_pca::io::{
    butterfly_template, gen_contour_sample, gen_sphere_sample, read_contour, read_contours, read_scree, scree_csv,
    write_dataset, write_results, ContourDataset, ContourFormat, ResultOptions, SyntheticSphereConfig,
};
use extrinsic_pca::shape::{shape_chord_distance, to_preshape, Contour, KendallShapes};
use extrinsic_pca::sphere::{Sphere, UnitVector};

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn square_csv_reads_as_four_points() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "sq.csv", "x,y\n0,0\n1,0\n1,1\n0,1\n");
    let c = read_contour(&p, ContourFormat::Auto).unwrap();
    assert_eq!(c.points(), &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
}

#[test]
fn matrix_layout_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let xs: Vec<String> = (0..500).map(|i| format!("{}", (i as f64 * 0.01256).cos())).collect();
    let ys: Vec<String> = (0..500).map(|i| format!("{}", (i as f64 * 0.01256).sin())).collect();
    let p = write(dir.path(), "m.csv", &format!("{}\n{}\n", xs.join(","), ys.join(",")));
    let c = read_contour(&p, ContourFormat::Auto).unwrap();
    assert_eq!(c.len(), 500);
    assert_eq!(c.points()[1][0], xs[1].parse::<f64>().unwrap());
    assert_eq!(c.points()[1][1], ys[1].parse::<f64>().unwrap());
    // the same file read as a point list fails on the first row
    assert!(matches!(
        read_contour(&p, ContourFormat::Points),
        Err(EpcaError::Parse { line: 1, .. })
    ));
}

#[test]
fn clockwise_input_matches_its_reversal() {
    let dir = tempfile::tempdir().unwrap();
    let cw = write(dir.path(), "cw.csv", "x,y\n0,0\n0,1\n2,1\n2,0\n");
    let ccw = write(dir.path(), "ccw.csv", "x,y\n0,0\n2,0\n2,1\n0,1\n");
    let a = read_contour(&cw, ContourFormat::Auto).unwrap();
    let b = read_contour(&ccw, ContourFormat::Auto).unwrap();
    assert!(a.signed_area() > 0.0);
    assert_eq!(a, b);
    let d = shape_chord_distance(&to_preshape(&a).unwrap(), &to_preshape(&b).unwrap()).unwrap();
    assert!(d < 1e-12);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.csv", "x,y\n0,0\n1,zero\n1,1\n");
    match read_contour(&bad, ContourFormat::Auto) {
        Err(EpcaError::Parse { line, msg, .. }) => {
            assert_eq!(line, 3);
            assert!(msg.contains("zero"));
        }
        other => panic!("unexpected {other:?}"),
    }
    let short = write(dir.path(), "short.csv", "x,y\n0,0\n1,0\n");
    let err = read_contour(&short, ContourFormat::Auto).unwrap_err();
    assert!(matches!(err, EpcaError::Parse { line: 3, .. }));
    assert_eq!(err.exit_code(), 1);
    let ragged = write(dir.path(), "ragged.csv", "x,y\n0,0\n1,0,4\n1,1\n");
    assert!(matches!(
        read_contour(&ragged, ContourFormat::Auto),
        Err(EpcaError::Parse { line: 3, .. })
    ));
}

fn small_dataset() -> ContourDataset {
    gen_contour_sample(&butterfly_template(64).unwrap(), 5, 0.1, 17).unwrap()
}

#[test]
fn dataset_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let mut data = small_dataset();
    data.k_common = None;
    write_dataset(&data, dir.path()).unwrap();
    let back = read_contours(&dir.path().join("manifest.json"), ContourFormat::Auto, None).unwrap();
    assert_eq!(back, data);

    // write again from what was read: identical bytes
    let dir2 = tempfile::tempdir().unwrap();
    write_dataset(&back, dir2.path()).unwrap();
    for name in ["manifest.json", "contour_000.csv", "contour_004.csv"] {
        assert_eq!(
            fs::read(dir.path().join(name)).unwrap(),
            fs::read(dir2.path().join(name)).unwrap()
        );
    }
}

#[test]
fn resampling_gives_common_counts() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.csv", "x,y\n0,0\n1,0\n1,1\n0,1\n");
    write(dir.path(), "b.csv", "x,y\n0,0\n2,0\n2,1\n1,1.5\n0,1\n");
    let manifest = r#"{"name":"mixed","files":["a.csv","b.csv"],"k_common":12,"provenance":"test"}"#;
    let m = write(dir.path(), "manifest.json", manifest);
    let data = read_contours(&m, ContourFormat::Auto, None).unwrap();
    assert_eq!(data.common_k().unwrap(), 12);
    assert!(data.contours.iter().all(|c| c.signed_area() > 0.0));
    assert_eq!(data.contours[0].points()[0], [0.0, 0.0]);

    let raw = read_contours(&m, ContourFormat::Auto, Some(None)).unwrap();
    assert!(raw.common_k().is_err());
    let other = read_contours(&m, ContourFormat::Auto, Some(Some(7))).unwrap();
    assert_eq!(other.common_k().unwrap(), 7);
}

#[test]
fn generators_are_deterministic() {
    let cfg = SyntheticSphereConfig::default_with_seed(11);
    let a = gen_sphere_sample(&cfg).unwrap();
    let b = gen_sphere_sample(&cfg).unwrap();
    assert_eq!(a.points(), b.points());
    let c = gen_sphere_sample(&SyntheticSphereConfig::default_with_seed(12)).unwrap();
    assert_ne!(a.points(), c.points());

    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    write_dataset(&small_dataset(), d1.path()).unwrap();
    write_dataset(&small_dataset(), d2.path()).unwrap();
    for name in ["manifest.json", "contour_002.csv"] {
        assert_eq!(
            fs::read(d1.path().join(name)).unwrap(),
            fs::read(d2.path().join(name)).unwrap()
        );
    }
}

#[test]
fn noiseless_contours_have_no_shape_variance() {
    let data = gen_contour_sample(&butterfly_template(80).unwrap(), 8, 0.0, 3).unwrap();
    let result = run_epca(&data.preshapes().unwrap(), &KendallShapes::new(80).unwrap()).unwrap();
    assert!(result.eigenvalues.iter().all(|&l| l.abs() <= 1e-10));
}

#[test]
fn scree_round_trip_and_cumulative_column() {
    let dir = tempfile::tempdir().unwrap();
    let eig = [0.0305, 0.0044];
    let p = write(dir.path(), "scree.csv", &scree_csv(&eig));
    assert_eq!(read_scree(&p).unwrap(), eig);
    let text = fs::read_to_string(&p).unwrap();
    let cumulative: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert!((cumulative[0] - 0.8739).abs() < 5e-5);
    assert!((cumulative[1] - 1.0).abs() < 5e-5);
    assert!(!text.contains('\r'));
}

#[test]
fn results_for_a_single_sample() {
    let dir = tempfile::tempdir().unwrap();
    let sphere = Sphere::new(2).unwrap();
    let p = UnitVector::from_slice(&[0.0, 0.6, 0.8]).unwrap();
    let result = run_epca(&[p], &sphere).unwrap();
    let report = write_results(&sphere, &result, dir.path(), &ResultOptions::default()).unwrap();
    assert_eq!(report.skipped.len(), 2);
    let scores = fs::read_to_string(dir.path().join("scores.csv")).unwrap();
    let lines: Vec<&str> = scores.lines().collect();
    assert_eq!(
        lines,
        ["sample,score1,score2", "0,0.0000000000000000e0,0.0000000000000000e0"]
    );
    assert_eq!(read_scree(&dir.path().join("scree.csv")).unwrap(), vec![0.0, 0.0]);
    let svg = fs::read_to_string(dir.path().join("scree.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn results_files_for_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let data = small_dataset();
    let backend = KendallShapes::new(64).unwrap();
    let result = run_epca(&data.preshapes().unwrap(), &backend).unwrap();
    let opts = ResultOptions {
        curves: vec![0, 1],
        t_grid: 9,
        projections: true,
    };
    write_results(&backend, &result, dir.path(), &opts).unwrap();
    let mean = fs::read_to_string(dir.path().join("mean.csv")).unwrap();
    assert_eq!(mean.lines().count(), 65);
    assert!(mean.starts_with("landmark,x,y\n0,"));
    let curve = fs::read_to_string(dir.path().join("pc_curve_1.csv")).unwrap();
    assert_eq!(curve.lines().count(), 1 + 9 * 64);
    assert!(curve.starts_with("t,landmark,x,y\n"));
    let proj = fs::read_to_string(dir.path().join("projections_1.csv")).unwrap();
    assert_eq!(proj.lines().count(), 1 + 5 * 64);

    // mean contour read back from mean.csv has the mean's shape
    let pts: Vec<[f64; 2]> = mean
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').skip(1).map(|v| v.parse().unwrap()).collect();
            [f[0], f[1]]
        })
        .collect();
    let c = Contour::new(pts).unwrap();
    let d = shape_chord_distance(&to_preshape(&c).unwrap(), &result.extrinsic_mean).unwrap();
    assert!(d < 1e-12);
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = write(dir.path(), "file", "not a directory");
    let sphere = Sphere::new(2).unwrap();
    let p = UnitVector::from_slice(&[1.0, 0.0, 0.0]).unwrap();
    let result = run_epca(&[p], &sphere).unwrap();
    let err = write_results(&sphere, &result, &blocker.join("out"), &ResultOptions::default()).unwrap_err();
    assert!(matches!(err, EpcaError::Io { .. }));
}
