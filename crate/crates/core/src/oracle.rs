//! Brute-force reference routes.
//!
//! Everything here recomputes quantities the fast paths produce, but by a
//! deliberately different method: circuit outputs come from explicitly
//! assembled unitary matrices (Kronecker products applied by dense
//! matrix-vector multiplication, never the in-place gate kernels), and
//! expected costs come from enumerating the exact outcome distribution
//! instead of sampling.  Tests hold the two routes against each other.

use num_complex::Complex64;

use crate::autoenc;
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::groups::{FunctionTable, GroupSpec};

type CMat = Vec<Vec<Complex64>>;

fn eye(n: usize) -> CMat {
    let mut m = vec![vec![Complex64::ZERO; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::ONE;
    }
    m
}

fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = (a.len(), a[0].len());
    let (br, bc) = (b.len(), b[0].len());
    let mut m = vec![vec![Complex64::ZERO; ac * bc]; ar * br];
    for i in 0..ar {
        for j in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    m[i * br + k][j * bc + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    m
}

fn matvec(m: &CMat, v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn hadamard2() -> CMat {
    let s = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
    vec![vec![s, s], vec![s, -s]]
}

fn dft(n: usize) -> CMat {
    let scale = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|k| {
            (0..n)
                .map(|j| {
                    Complex64::from_polar(
                        scale,
                        2.0 * std::f64::consts::PI * (j * k % n) as f64 / n as f64,
                    )
                })
                .collect()
        })
        .collect()
}

fn g2(theta: f64) -> CMat {
    let c = Complex64::from((2.0 * theta).cos());
    let s = Complex64::from((2.0 * theta).sin());
    vec![vec![c, s], vec![s, -c]]
}

fn oracle_permutation(f: &FunctionTable) -> CMat {
    let n = f.n() as usize;
    let m = f.m() as usize;
    let dim = 1usize << (n + m);
    let mut p = vec![vec![Complex64::ZERO; dim]; dim];
    for i in 0..dim {
        let x = i >> m;
        let y = i & ((1 << m) - 1);
        let j = (x << m) | (y ^ f.entry(x) as usize);
        p[j][i] = Complex64::ONE;
    }
    p
}

fn h_tensor(n: usize) -> CMat {
    let mut m = hadamard2();
    for _ in 1..n {
        m = kron(&m, &hadamard2());
    }
    m
}

fn to_distribution(v: &[Complex64], n: u8, m: u8) -> Vec<((BitString, BitString), f64)> {
    let mut out = Vec::with_capacity(v.len());
    for (i, a) in v.iter().enumerate() {
        let x = BitString::new((i >> m) as u32, n);
        let y = BitString::new((i & ((1 << m) - 1)) as u32, m);
        out.push(((x, y), a.norm_sqr()));
    }
    out
}

/// (IN, OUT) distribution of the hidden-subgroup circuit, assembled from
/// explicit matrices.
pub fn hsg_distribution(
    f: &FunctionTable,
    g: &GroupSpec,
) -> Result<Vec<((BitString, BitString), f64)>> {
    if f.n() != g.n_bits() {
        return Err(Error::WidthMismatch {
            expected: g.n_bits(),
            actual: f.n(),
        });
    }
    let n = f.n() as usize;
    let m = f.m() as usize;
    if n + m > 8 {
        return Err(Error::GroupTooLarge((n + m) as u8));
    }
    let dim = 1usize << (n + m);
    let mut v = vec![Complex64::ZERO; dim];
    v[0] = Complex64::ONE;

    v = matvec(&kron(&h_tensor(n), &eye(1 << m)), &v);
    v = matvec(&oracle_permutation(f), &v);
    let mut gqft = vec![vec![Complex64::ONE]];
    for &order in g.factors() {
        gqft = kron(&gqft, &dft(order as usize));
    }
    v = matvec(&kron(&gqft, &eye(1 << m)), &v);
    Ok(to_distribution(&v, f.n(), f.m()))
}

/// (IN, OUT) distribution of the tunable two-qubit circuit, assembled from
/// explicit matrices.
pub fn simon_distribution(
    f: &FunctionTable,
    theta1: f64,
    theta2: f64,
) -> Result<Vec<((BitString, BitString), f64)>> {
    if f.n() != 2 {
        return Err(Error::WidthMismatch {
            expected: 2,
            actual: f.n(),
        });
    }
    let m = f.m() as usize;
    let dim = 1usize << (2 + m);
    let mut v = vec![Complex64::ZERO; dim];
    v[0] = Complex64::ONE;
    v = matvec(&kron(&h_tensor(2), &eye(1 << m)), &v);
    v = matvec(&oracle_permutation(f), &v);
    let gg = kron(&g2(theta1), &g2(theta2));
    v = matvec(&kron(&gg, &eye(1 << m)), &v);
    Ok(to_distribution(&v, 2, f.m()))
}

fn expected_record_cost(
    f: &FunctionTable,
    g: &GroupSpec,
    in_probs: &[(BitString, f64)],
) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for &(y, p) in in_probs {
        if p <= 1e-15 {
            continue;
        }
        if let Some(c) = autoenc::outcome_cost(f, g, y)? {
            num += p * c as f64;
            den += p;
        }
    }
    if den > 1e-12 {
        return Ok(num / den);
    }
    // every reachable outcome is uninformative; the decoder then decodes
    // the sample as one multiset over the support
    let weighted: Vec<(BitString, usize)> = in_probs
        .iter()
        .filter(|&&(_, p)| p > 1e-15)
        .map(|&(y, _)| (y, 1))
        .collect();
    let hyp = crate::hsg::infer_from_outcomes(g, &weighted)?;
    let fhat = crate::compress::reconstruct(&crate::compress::compress(f, &hyp)?)?;
    Ok(autoenc::table_error(f, &fhat) as f64)
}

fn in_marginal(dist: &[((BitString, BitString), f64)]) -> Vec<(BitString, f64)> {
    let mut map = std::collections::BTreeMap::new();
    for &((x, _), p) in dist {
        *map.entry(x).or_insert(0.0) += p;
    }
    map.into_iter().collect()
}

/// Large-shot expected cost of the Fourier encoder at a forced switch
/// setting.  Exact whenever all informative outcomes decode to the same
/// error, which covers both forced branches on the four-point table.
pub fn expected_cost_gft(f: &FunctionTable, theta_on: bool) -> Result<f64> {
    let g = if theta_on {
        GroupSpec::new(vec![4])?
    } else {
        GroupSpec::new(vec![2, 2])?
    };
    let dist = hsg_distribution(f, &g)?;
    expected_record_cost(f, &g, &in_marginal(&dist))
}

/// Large-shot expected cost of the tunable two-qubit encoder.
pub fn expected_cost_simon(f: &FunctionTable, theta1: f64, theta2: f64) -> Result<f64> {
    let dist = simon_distribution(f, theta1, theta2)?;
    let g = GroupSpec::new(vec![2, 2])?;
    expected_record_cost(f, &g, &in_marginal(&dist))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hsg;

    fn toy() -> FunctionTable {
        FunctionTable::new(2, 1, vec![1, 1, 0, 0]).unwrap()
    }

    fn max_dist_diff(
        a: &[((BitString, BitString), f64)],
        b: &[((BitString, BitString), f64)],
    ) -> f64 {
        assert_eq!(a.len(), b.len());
        a.iter()
            .zip(b)
            .map(|(&((xa, ya), pa), &((xb, yb), pb))| {
                assert_eq!((xa, ya), (xb, yb));
                (pa - pb).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn matrix_route_matches_gate_route_for_hsg() {
        for factors in ["2,2", "4", "2,2,2", "8", "2,4", "4,2"] {
            let g: GroupSpec = factors.parse().unwrap();
            for seed in 0..5u64 {
                let f = crate::groups::planted_database(
                    &g,
                    BitString::new(1 + (seed as u32) % (g.order() as u32 - 1), g.n_bits()),
                    1,
                    seed,
                )
                .unwrap();
                let (state, layout) = hsg::circuit_state(&f, &g).unwrap();
                let fast = state.joint_distribution(&layout).unwrap();
                let slow = hsg_distribution(&f, &g).unwrap();
                assert!(max_dist_diff(&fast, &slow) < 1e-12);
            }
        }
    }

    #[test]
    fn matrix_route_matches_gate_route_for_simon() {
        let angles = [0.0, 0.2, std::f64::consts::FRAC_PI_8, 0.7];
        for &t1 in &angles {
            for &t2 in &angles {
                let (state, layout) = autoenc::simon_state(&toy(), t1, t2).unwrap();
                let fast = state.joint_distribution(&layout).unwrap();
                let slow = simon_distribution(&toy(), t1, t2).unwrap();
                assert!(max_dist_diff(&fast, &slow) < 1e-12);
            }
        }
    }

    #[test]
    fn forced_costs_for_the_toy_table() {
        assert!(expected_cost_gft(&toy(), false).unwrap().abs() < 1e-12);
        assert!((expected_cost_gft(&toy(), true).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn constant_table_expected_cost_is_zero() {
        let c = FunctionTable::constant(2, 1, 1).unwrap();
        assert!(expected_cost_gft(&c, false).unwrap().abs() < 1e-12);
        assert!(expected_cost_gft(&c, true).unwrap().abs() < 1e-12);
    }

    #[test]
    fn simon_expected_cost_profile() {
        let h = std::f64::consts::FRAC_PI_8;
        assert!(expected_cost_simon(&toy(), h, h).unwrap().abs() < 1e-12);
        let at_zero = expected_cost_simon(&toy(), 0.0, 0.0).unwrap();
        assert!((at_zero - 4.0 / 3.0).abs() < 1e-12);
        // smooth increase away from the optimum along the symmetry axis
        let near = expected_cost_simon(&toy(), h, h + 0.05).unwrap();
        let far = expected_cost_simon(&toy(), h, h + 0.2).unwrap();
        assert!(near > 0.0 && far > near);
        // the off-axis angle does not matter for this table
        let twisted = expected_cost_simon(&toy(), h + 0.3, h).unwrap();
        assert!(twisted.abs() < 1e-12);
    }
}
