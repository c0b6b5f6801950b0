use fourtangle::chain::wick::{all_strings, pauli_expectation_raw};
use fourtangle::chain::*;
use fourtangle::measures::one_tangle;
use fourtangle::numkernel::{herm_eig, kron_all, ComplexMatrix, Pauli, C64};
use fourtangle::PureState;

/// `H` summed from Kronecker products of Pauli matrices.
fn kron_hamiltonian(lambda: f64, gamma: f64, n: usize) -> ComplexMatrix {
    let dim = 1usize << n;
    let mut h = ComplexMatrix::zeros(dim, dim);
    let mut add = |ops: &[(usize, Pauli)], c: f64| {
        let factors: Vec<ComplexMatrix> = (0..n)
            .map(|s| {
                ops.iter()
                    .find(|(site, _)| *site == s)
                    .map_or(Pauli::I, |(_, p)| *p)
                    .matrix()
            })
            .collect();
        let term = kron_all(&factors);
        for (x, y) in h.as_mut_slice().iter_mut().zip(term.as_slice()) {
            *x += y * c;
        }
    };
    for i in 0..n - 1 {
        add(&[(i, Pauli::X), (i + 1, Pauli::X)], -lambda * (1.0 + gamma) / 2.0);
        add(&[(i, Pauli::Y), (i + 1, Pauli::Y)], -lambda * (1.0 - gamma) / 2.0);
    }
    for i in 0..n {
        add(&[(i, Pauli::Z)], -1.0);
    }
    h
}

/// Lowest eigenpair with even `prod Z`.
fn dense_even_ground(lambda: f64, gamma: f64, n: usize) -> (f64, PureState) {
    let eig = herm_eig(&kron_hamiltonian(lambda, gamma, n)).unwrap();
    let dim = 1usize << n;
    for k in (0..dim).rev() {
        let v = eig.vectors.column(k);
        let parity: f64 = v
            .iter()
            .enumerate()
            .map(|(b, a)| if b.count_ones() % 2 == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum();
        if parity > 0.5 {
            return (eig.values[k], PureState::normalized(v).unwrap());
        }
    }
    unreachable!("no even eigenvector")
}

fn expectation(psi: &PureState, sites: &[usize], labels: &[Pauli]) -> f64 {
    let n = psi.qubits();
    let mut ops = vec![Pauli::I; n];
    for (&s, &l) in sites.iter().zip(labels) {
        ops[s] = l;
    }
    let op = kron_all(&ops.iter().map(|p| p.matrix()).collect::<Vec<_>>());
    let a = psi.amplitudes();
    let v = op.apply(a);
    a.iter().zip(&v).map(|(x, y)| x.conj() * y).sum::<C64>().re
}

fn cfg(lambda: f64, gamma: f64, n: usize, backend: Backend) -> ChainConfig {
    ChainConfig::new(lambda, gamma, n, backend).unwrap()
}

#[test]
fn lanczos_and_free_fermions_match_dense_oracle() {
    for (lambda, gamma) in [(0.4, 1.0), (1.0, 0.5), (1.5, 0.3), (0.8, 0.0), (2.0, 0.9)] {
        let n = 6;
        let (energy, dense) = dense_even_ground(lambda, gamma, n);
        let ed = ed_solve(&cfg(lambda, gamma, n, Backend::Ed)).unwrap();
        assert!((ed.energy - energy).abs() < 1e-10, "energy {} vs {}", ed.energy, energy);
        let table = ff_correlators(&cfg(lambda, gamma, n, Backend::FreeFermion)).unwrap();
        let sites = [1, 3, 4];
        for labels in all_strings(3) {
            let oracle = expectation(&dense, &sites, &labels);
            let e = ed_pauli_expectation(&ed.state, &sites, &labels).unwrap();
            let f = pauli_expectation_raw(&table, &sites, &labels).unwrap();
            assert!((e - oracle).abs() < 1e-9, "ED {labels:?}: {e} vs {oracle}");
            assert!((f - C64::new(oracle, 0.0)).norm() < 1e-9, "FF {labels:?}: {f} vs {oracle}");
        }
    }
}

#[test]
fn cross_validation_examples() {
    let q = |s: &str| s.parse::<SiteQuad>().unwrap();
    let d = cross_validate(&cfg(0.5, 1.0, 10, Backend::Ed), &q("1,1,1")).unwrap();
    assert!(d <= 1e-8, "{d}");
    let d = cross_validate(&cfg(1.3, 0.5, 12, Backend::Ed), &q("1,2,1")).unwrap();
    assert!(d <= 1e-8, "{d}");
    for quad in ["1,1,1", "2,1,3", "1,4,1"] {
        let d = cross_validate(&cfg(0.0, 0.7, 10, Backend::Ed), &q(quad)).unwrap();
        assert!(d <= 1e-10, "{d}");
    }
}

#[test]
fn polarized_chain() {
    let psi = ed_ground_state(&cfg(0.0, 1.0, 8, Backend::Ed)).unwrap();
    assert!((psi.amplitudes()[0].norm() - 1.0).abs() < 1e-12);
    let table = ff_correlators(&cfg(0.0, 1.0, 8, Backend::FreeFermion)).unwrap();
    for s in 0..8 {
        assert!((ed_pauli_expectation(&psi, &[s], &[Pauli::Z]).unwrap() - 1.0).abs() < 1e-12);
        assert!((pauli_expectation(&table, &[s], &[Pauli::Z]).unwrap() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn nearest_neighbour_xx_at_criticality() {
    let n = 10;
    let psi = ed_ground_state(&cfg(1.0, 1.0, n, Backend::Ed)).unwrap();
    let table = ff_correlators(&cfg(1.0, 1.0, n, Backend::FreeFermion)).unwrap();
    for i in 0..n - 1 {
        let e = ed_pauli_expectation(&psi, &[i, i + 1], &[Pauli::X, Pauli::X]).unwrap();
        let f = pauli_expectation(&table, &[i, i + 1], &[Pauli::X, Pauli::X]).unwrap();
        assert!((e - f).abs() < 1e-10);
        assert!(e > 0.3);
    }
}

#[test]
fn free_fermion_rdm_equals_ed_partial_trace() {
    let n = 10;
    let sites = [2, 3, 5, 8];
    let psi = ed_ground_state(&cfg(1.2, 0.5, n, Backend::Ed)).unwrap();
    let table = ff_correlators(&cfg(1.2, 0.5, n, Backend::FreeFermion)).unwrap();
    let exact = psi.reduced(&sites).unwrap();
    let free = ff_rdm(&table, &sites).unwrap();
    assert!(exact.matrix().max_abs_diff(free.matrix()) <= 1e-8);
}

#[test]
fn ed_and_free_fermion_measures_agree() {
    let n = 10;
    let c = cfg(0.9, 0.6, n, Backend::Ed);
    let psi = ed_ground_state(&c).unwrap();
    let table = ff_correlators(&c.with_backend(Backend::FreeFermion).unwrap()).unwrap();
    for quad in ["1,1,1", "1,2,1", "2,1,2", "1,1,2"] {
        let quad: SiteQuad = quad.parse().unwrap();
        let a = quad_measures(&psi, &quad).unwrap();
        let b = quad_measures(&table, &quad).unwrap();
        assert!((a.c4 - b.c4).abs() < 1e-8);
        assert!((a.c2_first - b.c2_first).abs() < 1e-8);
        assert!((a.c2_last - b.c2_last).abs() < 1e-8);
    }
    let (ra, rb) = (residual_report(&psi).unwrap(), residual_report(&table).unwrap());
    assert!((ra.tau1 - rb.tau1).abs() < 1e-8);
    assert!((ra.residual - rb.residual).abs() < 1e-8);
}

/// Reverses the qubit order of a 4-qubit operator.
fn reverse_qubits(m: &ComplexMatrix) -> ComplexMatrix {
    let rev = |b: usize| (0..4).fold(0, |acc, k| acc | (((b >> k) & 1) << (3 - k)));
    ComplexMatrix::from_fn(16, 16, |i, j| m[(rev(i), rev(j))])
}

#[test]
fn reflection_symmetry() {
    let n = 40;
    for (lambda, gamma) in [(0.8, 1.0), (1.3, 0.5)] {
        let table = ff_correlators(&cfg(lambda, gamma, n, Backend::FreeFermion)).unwrap();
        let sites = [5, 6, 9, 12];
        let mirrored = [n - 1 - 12, n - 1 - 9, n - 1 - 6, n - 1 - 5];
        let a = ff_rdm(&table, &sites).unwrap();
        let b = ff_rdm(&table, &mirrored).unwrap();
        assert!(a.matrix().max_abs_diff(&reverse_qubits(b.matrix())) <= 1e-9);
    }
}

#[test]
fn transverse_magnetization_vanishes() {
    for lambda in [0.5, 1.5, 2.5] {
        let psi = ed_ground_state(&cfg(lambda, 0.8, 10, Backend::Ed)).unwrap();
        for s in 0..10 {
            for p in [Pauli::X, Pauli::Y] {
                assert!(ed_pauli_expectation(&psi, &[s], &[p]).unwrap().abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn central_correlators_converge_in_length() {
    let small = ff_correlators(&cfg(0.9, 0.5, 1000, Backend::FreeFermion)).unwrap();
    let large = ff_correlators(&cfg(0.9, 0.5, 2000, Backend::FreeFermion)).unwrap();
    let (c1, c2) = (center_site(1000), center_site(2000));
    for a in 0..10 {
        for b in 0..10 {
            let d = (small.get(c1 - 5 + a, c1 - 5 + b) - large.get(c2 - 5 + a, c2 - 5 + b)).abs();
            assert!(d < 1e-8, "{d}");
        }
    }
}

#[test]
fn factorizing_field_is_a_tilted_product_in_the_bulk() {
    // spins tilted by theta with cos^2 theta = (1 - gamma) / (1 + gamma):
    // <Z> = cos theta, <X_i X_j> = sin^2 theta at any distance
    let gamma = 0.6;
    let lambda = factorizing_field(gamma).unwrap();
    assert!((lambda - 1.25).abs() < 1e-15);
    let cos2 = (1.0 - gamma) / (1.0 + gamma);
    let c = cfg(lambda, gamma, 1000, Backend::FreeFermion);
    let quad: SiteQuad = "1,1,1".parse().unwrap();
    let table = table_for(&c, &[quad], true).unwrap();
    let i = center_site(1000);
    let z = pauli_expectation(&table, &[i], &[Pauli::Z]).unwrap();
    assert!((z - cos2.sqrt()).abs() < 1e-10, "{z}");
    for d in 1..=4 {
        let xx = pauli_expectation(&table, &[i, i + d], &[Pauli::X, Pauli::X]).unwrap();
        assert!((xx - (1.0 - cos2)).abs() < 1e-10, "{xx}");
        let yy = pauli_expectation(&table, &[i, i + d], &[Pauli::Y, Pauli::Y]).unwrap();
        assert!(yy.abs() < 1e-10, "{yy}");
    }
    let m = quad_measures(&table, &quad).unwrap();
    assert!(m.c4 < 1e-10 && m.c2_first < 1e-10);
    assert!(pair_concurrence(&table, 2).unwrap() < 1e-10);
}

#[test]
fn ground_energy_decreases_with_length() {
    let mut previous = f64::INFINITY;
    for n in 2..=12 {
        let e = ed_solve(&cfg(1.1, 0.7, n, Backend::Ed)).unwrap().energy;
        assert!(e < previous, "E({n}) = {e} not below {previous}");
        previous = e;
    }
}

#[test]
fn one_tangle_agrees_across_backends() {
    let c = cfg(2.0, 1.0, 12, Backend::Ed);
    let psi = ed_ground_state(&c).unwrap();
    let table = ff_correlators(&c.with_backend(Backend::FreeFermion).unwrap()).unwrap();
    let site = center_site(12);
    let a = one_tangle(&psi.reduced(&[site]).unwrap()).unwrap();
    let b = one_tangle(&ff_rdm1(&table, site).unwrap()).unwrap();
    assert!((a - b).abs() < 1e-9);
    assert!(a > 0.9);
}

#[test]
fn ising_critical_nearest_neighbour_concurrence() {
    // 0.19503 is the known infinite-chain value at lambda = 1
    let table = table_for(&cfg(1.0, 1.0, 1000, Backend::FreeFermion), &[], true).unwrap();
    let c = pair_concurrence(&table, 1).unwrap();
    assert!((c - 0.19503).abs() < 5e-4, "{c}");
}
