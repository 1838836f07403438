use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use specmetric::stats::{f_sf, levene, levene_with, pearson, LeveneCenter};
use statrs::distribution::{ContinuousCDF, FisherSnedecor};

const TIGHT: [f64; 10] = [9.8, 10.1, 10.0, 9.9, 10.2, 10.0, 9.7, 10.3, 10.1, 9.9];
const WIDE: [f64; 10] = [6.0, 14.5, 8.2, 12.9, 5.1, 15.3, 9.0, 11.8, 4.4, 16.0];
const THIRD: [f64; 8] = [10.0, 10.4, 9.6, 10.2, 9.8, 10.1, 9.9, 10.3];

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1e-300)
}

#[test]
fn f_table_critical_value() {
    let p = f_sf(3.326, 5.0, 10.0).unwrap();
    assert!((p - 0.05).abs() < 0.001, "{p}");
    // scipy.stats.f.sf(3.326, 5, 10)
    assert!(rel_close(p, 0.04999328474393287, 1e-9), "{p}");
}

#[test]
fn f_sf_matches_statrs() {
    for &(d1, d2) in &[
        (1.0, 1.0),
        (2.0, 5.0),
        (5.0, 10.0),
        (3.5, 7.25),
        (30.0, 2.0),
        (10.0, 400.0),
    ] {
        let dist = FisherSnedecor::new(d1, d2).unwrap();
        for &x in &[0.01, 0.3, 1.0, 2.5, 7.0, 40.0] {
            let ours = f_sf(x, d1, d2).unwrap();
            let theirs = dist.sf(x);
            assert!((ours - theirs).abs() < 1e-10, "F({d1},{d2}) at {x}: {ours} vs {theirs}");
        }
    }
}

#[test]
fn f_sf_scipy_values() {
    assert!(rel_close(f_sf(2.5, 3.5, 7.25).unwrap(), 0.1371377483616859, 1e-8));
    assert!(rel_close(f_sf(0.3, 1.0, 1.0).unwrap(), 0.6809942799600229, 1e-9));
    assert!(rel_close(f_sf(40.0, 2.0, 200.0).unwrap(), 2.438913693989176e-15, 1e-6));
}

#[test]
fn levene_matches_scipy() {
    // scipy.stats.levene(TIGHT, WIDE, center='mean')
    let r = levene(&[&TIGHT[..], &WIDE[..]]).unwrap();
    assert!(rel_close(r.w, 42.900561231831944, 1e-10), "{}", r.w);
    assert!(rel_close(r.p, 3.7281852057509177e-06, 1e-6), "{}", r.p);
    assert!(r.p < 0.01);
    assert_eq!((r.df1, r.df2), (1, 18));

    let r = levene_with(&[&TIGHT[..], &WIDE[..]], LeveneCenter::Median).unwrap();
    assert!(rel_close(r.w, 42.802010050251276, 1e-10), "{}", r.w);
    assert!(rel_close(r.p, 3.7840441519706784e-06, 1e-6), "{}", r.p);

    let r = levene(&[&TIGHT[..], &WIDE[..], &THIRD[..]]).unwrap();
    assert!(rel_close(r.w, 37.45414811708422, 1e-10), "{}", r.w);
    assert!(rel_close(r.p, 3.014606959187437e-08, 1e-6), "{}", r.p);
}

#[test]
fn levene_false_positive_rate() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let z = Normal::new(0.0, 1.0).unwrap();
    let replicates = 1000;
    let rejections = (0..replicates)
        .filter(|_| {
            let groups: Vec<Vec<f64>> = (0..3).map(|_| (0..20).map(|_| z.sample(&mut rng)).collect()).collect();
            levene(&groups).unwrap().p < 0.05
        })
        .count();
    let rate = rejections as f64 / replicates as f64;
    assert!((rate - 0.05).abs() <= 0.02, "rate {rate}");
}

#[test]
fn pearson_on_affine_data() {
    let xs: Vec<f64> = (0..25).map(|i| i as f64 * 0.37 - 2.0).collect();
    let up: Vec<f64> = xs.iter().map(|x| 3.0 * x + 1.5).collect();
    let down: Vec<f64> = xs.iter().map(|x| -0.25 * x + 9.0).collect();
    assert_eq!(pearson(&xs, &up).unwrap().r, 1.0);
    assert_eq!(pearson(&xs, &down).unwrap().r, -1.0);
}

#[test]
fn pearson_matches_textbook_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let z = Normal::new(0.0, 1.0).unwrap();
    for rho in [-0.9, -0.3, 0.0, 0.5, 0.99] {
        let xs: Vec<f64> = (0..200).map(|_| z.sample(&mut rng)).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| rho * x + (1.0 - rho * rho).sqrt() * z.sample(&mut rng))
            .collect();
        let n = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
        let textbook = sxy / (sxx * syy).sqrt();
        let r = pearson(&xs, &ys).unwrap().r;
        assert!((r - textbook).abs() < 1e-12, "{r} vs {textbook}");
    }
    let xs: Vec<f64> = (0..30).map(|i| i as f64 / 3.0).collect();
    let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x - 7.0).collect();
    assert_eq!(pearson(&xs, &ys).unwrap().r, 1.0);
}
