//! Cross-checks of the enumeration core against independent brute-force
//! oracles: box enumeration, exhaustive CVP, direct root-system
//! constructions, and the formal q-series of the catalog closed forms.

use nalgebra::{DMatrix, DVector};
use latticeforge_core::catalog::{golay_generator, CatalogLattice};
use latticeforge_core::enumerate::{closest_vector, Enumerator};
use latticeforge_core::lattice::Lattice;
use latticeforge_core::theta::{theta_series_coefficients, ThetaSeries};

/// All integer coordinate vectors z with ‖Bz‖² ≤ radius, found by scanning
/// the full coordinate box |z_i| ≤ √radius·‖row_i(B⁻¹)‖. Independent of the
/// production enumerator: no LLL, no QR, no pruning.
fn box_oracle(basis: &DMatrix<f64>, radius: f64) -> Vec<Vec<i64>> {
    let n = basis.ncols();
    let inv = basis.clone().try_inverse().expect("test basis invertible");
    let bounds: Vec<i64> = (0..n)
        .map(|i| (radius.sqrt() * inv.row(i).norm() + 1e-9).floor() as i64)
        .collect();
    let mut z = vec![0i64; n];
    for (i, &b) in bounds.iter().enumerate() {
        z[i] = -b;
    }
    let mut out = Vec::new();
    loop {
        let v = basis * DVector::from_iterator(n, z.iter().map(|&c| c as f64));
        if v.norm_squared() <= radius + 1e-9 {
            out.push(z.clone());
        }
        // Odometer step over the box.
        let mut i = 0;
        loop {
            if i == n {
                out.sort();
                return out;
            }
            z[i] += 1;
            if z[i] <= bounds[i] {
                break;
            }
            z[i] = -bounds[i];
            i += 1;
        }
    }
}

fn sorted_coords(lat: &Lattice, radius: f64) -> Vec<Vec<i64>> {
    let en = Enumerator::new(lat).unwrap();
    let mut pts: Vec<Vec<i64>> = en
        .points_within(radius, 10_000_000)
        .unwrap()
        .into_iter()
        .map(|p| p.coords)
        .collect();
    pts.sort();
    pts
}

#[test]
fn enumerator_matches_box_oracle_on_small_lattices() {
    let cases: Vec<(Lattice, f64)> = vec![
        (CatalogLattice::A2.build().unwrap(), 1.0),
        (CatalogLattice::A2.build().unwrap(), 4.0),
        (CatalogLattice::Zn(3).build().unwrap(), 3.0),
        (CatalogLattice::Dn(3).build().unwrap(), 4.0),
        (CatalogLattice::Dn(4).build().unwrap(), 4.0),
    ];
    for (lat, radius) in cases {
        let expect = box_oracle(lat.basis(), radius);
        let got = sorted_coords(&lat, radius);
        assert_eq!(got, expect, "mismatch at radius {radius}");
    }
}

#[test]
fn enumerator_matches_box_oracle_on_a_sheared_basis() {
    // Deliberately skewed integer basis, |det| = 6.
    let basis = DMatrix::from_column_slice(
        3,
        3,
        &[2.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 3.0],
    );
    let lat = Lattice::from_basis(basis.clone()).unwrap();
    for radius in [2.0, 5.0, 9.0] {
        let expect = box_oracle(&basis, radius);
        let got = sorted_coords(&lat, radius);
        assert_eq!(got, expect, "mismatch at radius {radius}");
    }
}

#[test]
fn e8_roots_constructed_directly() {
    // The 240 minimal vectors of E8: ±e_i ± e_j (112) and (±1/2)^8 with an
    // even number of minus signs (128). Built without the enumerator.
    let lat = CatalogLattice::E8.build().unwrap();
    let mut roots: Vec<Vec<i64>> = Vec::new();
    for i in 0..8 {
        for j in (i + 1)..8 {
            for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut v = vec![0.0; 8];
                v[i] = si;
                v[j] = sj;
                roots.push(quantized(&v));
            }
        }
    }
    for mask in 0..256u32 {
        if mask.count_ones() % 2 == 0 {
            let v: Vec<f64> = (0..8)
                .map(|i| if mask >> i & 1 == 1 { -0.5 } else { 0.5 })
                .collect();
            roots.push(quantized(&v));
        }
    }
    assert_eq!(roots.len(), 240);
    // Every root lies in the lattice: its basis coordinates are integers.
    for r in &roots {
        let point = DVector::from_iterator(8, r.iter().map(|&c| c as f64 / 2.0));
        let coords = lat.coords_of(&point).unwrap();
        for c in coords.iter() {
            assert!((c - c.round()).abs() < 1e-9, "root outside E8");
        }
    }
    // And the enumerator finds exactly these plus the origin.
    let en = Enumerator::new(&lat).unwrap();
    let pts = en.points_within(2.0, 1_000_000).unwrap();
    assert_eq!(pts.len(), 241);
    let mut got: Vec<Vec<i64>> = pts
        .iter()
        .filter(|p| p.norm > 0.5)
        .map(|p| {
            let v = lat.vector(&p.coords);
            quantized(v.as_slice())
        })
        .collect();
    got.sort();
    roots.sort();
    assert_eq!(got, roots);
}

/// Doubled integer coordinates, so half-integer vectors quantize exactly.
fn quantized(v: &[f64]) -> Vec<i64> {
    v.iter().map(|&x| (2.0 * x).round() as i64).collect()
}

#[test]
fn cvp_matches_exhaustive_search() {
    let basis = DMatrix::from_column_slice(
        3,
        3,
        &[2.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 3.0],
    );
    let lat = Lattice::from_basis(basis.clone()).unwrap();
    let inv = basis.clone().try_inverse().unwrap();
    let targets = [
        [0.3, -1.7, 2.2],
        [5.5, 5.5, -5.5],
        [-0.49, 0.51, 0.0],
        [1.0, 1.0, 1.0],
        [-3.3, 4.8, -0.2],
        [0.0, 0.0, 1.49],
    ];
    for t in targets {
        let y = DVector::from_row_slice(&t);
        let cp = closest_vector(&lat, &y).unwrap();
        // Brute force over a coordinate box around the unrounded preimage.
        let center = &inv * &y;
        let mut best = f64::MAX;
        for a in -3..=3i64 {
            for b in -3..=3i64 {
                for c in -3..=3i64 {
                    let z = DVector::from_vec(vec![
                        center[0].round() + a as f64,
                        center[1].round() + b as f64,
                        center[2].round() + c as f64,
                    ]);
                    let d = (&basis * z - &y).norm_squared();
                    if d < best {
                        best = d;
                    }
                }
            }
        }
        assert!((cp.dist2 - best).abs() < 1e-9, "target {t:?}");
        assert!(((&cp.vector - &y).norm_squared() - best).abs() < 1e-9);
    }
}

#[test]
fn enumerated_shells_match_formal_series() {
    // The closed-form theta of every catalog lattice, expanded formally in
    // u = q^{1/4} with exact integer arithmetic, must agree with direct
    // shell enumeration coefficient by coefficient up to a matched cutoff.
    let cases = [
        (CatalogLattice::Zn(1), 6u32),
        (CatalogLattice::Zn(2), 6),
        (CatalogLattice::Zn(3), 6),
        (CatalogLattice::Zn(4), 6),
        (CatalogLattice::Dn(3), 6),
        (CatalogLattice::Dn(4), 6),
        (CatalogLattice::Dn(5), 6),
        (CatalogLattice::A2, 6),
        (CatalogLattice::E8, 8),
        (CatalogLattice::K12, 8),
        (CatalogLattice::Leech24, 4),
    ];
    for (name, r_max) in cases {
        let coeffs = theta_series_coefficients(name, r_max).unwrap();
        let lat = name.build().unwrap();
        let series = ThetaSeries::from_lattice(&lat, r_max as f64, 20_000_000).unwrap();
        let mut by_quarter = vec![0u64; 4 * r_max as usize + 1];
        for &(norm, count) in series.entries() {
            let k = (4.0 * norm).round();
            assert!(
                (4.0 * norm - k).abs() < 1e-6,
                "{name}: off-grid shell at {norm}"
            );
            by_quarter[k as usize] = count;
        }
        for (k, &c) in coeffs.iter().enumerate() {
            assert_eq!(
                by_quarter[k] as i128, c,
                "{name}: coefficient of q^{}/4 differs",
                k
            );
        }
    }
}

#[test]
fn golay_code_weight_distribution() {
    // The [24,12,8] Golay code has weight enumerator
    // 1 + 759 y^8 + 2576 y^12 + 759 y^16 + y^24.
    let gens = golay_generator();
    assert_eq!(gens.len(), 12);
    let mut hist = [0u32; 25];
    for mask in 0..4096u32 {
        let mut word = [0u8; 24];
        for (i, row) in gens.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for (w, r) in word.iter_mut().zip(row) {
                    *w ^= r;
                }
            }
        }
        let weight: u8 = word.iter().sum();
        hist[weight as usize] += 1;
    }
    assert_eq!(hist[0], 1);
    assert_eq!(hist[8], 759);
    assert_eq!(hist[12], 2576);
    assert_eq!(hist[16], 759);
    assert_eq!(hist[24], 1);
    assert_eq!(hist.iter().sum::<u32>(), 4096);
}
