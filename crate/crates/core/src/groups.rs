//! Finite abelian group arithmetic over bit strings.
//!
//! A [`GroupSpec`] is a product of cyclic factors whose orders are powers
//! of two, so every element embeds exactly into a fixed-width bit string.
//! The bit string is read as mixed-radix digits, most significant factor
//! first: under `[4]` the string `10` is the integer 2, while under `[2,2]`
//! it is the pair (1, 0) and addition is bitwise XOR.
//!
//! [`brute_force_period`] is the classical reference oracle: it checks the
//! defining symmetry `f(x) = f(x + r)` for every candidate `r` by direct
//! enumeration, and everything the quantum side infers is validated
//! against it.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Upper bound on total index bits; keeps dense tables and statevectors
/// at desk scale.
pub const MAX_GROUP_BITS: u8 = 12;

/// A finite abelian group `Z_{N1} x Z_{N2} x ...` with power-of-two factors.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupSpec {
    factors: Vec<u32>,
    // (bit offset, bit width) of each factor's digit
    spans: Vec<(u8, u8)>,
    n_bits: u8,
}

impl GroupSpec {
    pub fn new(factors: Vec<u32>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidGroupFactor(0));
        }
        let mut spans = Vec::with_capacity(factors.len());
        let mut offset = 0u8;
        for &n in &factors {
            if n < 2 || !n.is_power_of_two() {
                return Err(Error::InvalidGroupFactor(n));
            }
            let w = n.trailing_zeros() as u8;
            spans.push((offset, w));
            offset += w;
        }
        if offset > MAX_GROUP_BITS {
            return Err(Error::GroupTooLarge(offset));
        }
        Ok(GroupSpec {
            factors,
            spans,
            n_bits: offset,
        })
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn n_bits(&self) -> u8 {
        self.n_bits
    }

    /// Number of group elements, `2^n_bits`.
    pub fn order(&self) -> usize {
        1usize << self.n_bits
    }

    pub fn identity(&self) -> BitString {
        BitString::zero(self.n_bits)
    }

    pub fn elements(&self) -> impl Iterator<Item = BitString> {
        BitString::all(self.n_bits)
    }

    /// Bit span (offset, width) of each factor's digit.
    pub fn spans(&self) -> &[(u8, u8)] {
        &self.spans
    }

    fn check(&self, x: BitString) -> Result<()> {
        if x.width() != self.n_bits {
            return Err(Error::WidthMismatch {
                expected: self.n_bits,
                actual: x.width(),
            });
        }
        Ok(())
    }

    /// Mixed-radix digits of `x`, one per factor.
    pub fn digits(&self, x: BitString) -> Result<Vec<u32>> {
        self.check(x)?;
        Ok(self
            .spans
            .iter()
            .map(|&(off, w)| x.slice(off, w).value())
            .collect())
    }

    pub fn from_digits(&self, digits: &[u32]) -> BitString {
        assert_eq!(digits.len(), self.factors.len());
        let mut v = 0u32;
        for (d, &(_, w)) in digits.iter().zip(&self.spans) {
            debug_assert!(*d < (1u32 << w));
            v = (v << w) | d;
        }
        BitString::new(v, self.n_bits)
    }

    /// Componentwise addition modulo each factor order.
    pub fn add(&self, a: BitString, b: BitString) -> Result<BitString> {
        self.check(a)?;
        self.check(b)?;
        let mut v = 0u32;
        for (&n, &(off, w)) in self.factors.iter().zip(&self.spans) {
            let d = (a.slice(off, w).value() + b.slice(off, w).value()) % n;
            v = (v << w) | d;
        }
        Ok(BitString::new(v, self.n_bits))
    }

    /// The cyclic subgroup generated by `r`, sorted ascending.
    pub fn subgroup(&self, r: BitString) -> Result<Vec<BitString>> {
        self.check(r)?;
        let mut members = vec![self.identity()];
        let mut cur = r;
        while cur != self.identity() {
            members.push(cur);
            cur = self.add(cur, r)?;
        }
        members.sort();
        Ok(members)
    }

    /// Smallest k >= 1 with k*r = identity.
    pub fn element_order(&self, r: BitString) -> Result<usize> {
        Ok(self.subgroup(r)?.len())
    }

    /// Character orthogonality test: does the Fourier label `y` annihilate
    /// the subgroup generated by `r`?  True iff `sum_j y_j r_j (M/N_j) = 0
    /// (mod M)` with `M` the largest factor order, which reduces to the
    /// XOR dot product for `[2,..,2]` and to `y*r = 0 (mod N)` for `[N]`.
    pub fn annihilates(&self, y: BitString, r: BitString) -> Result<bool> {
        self.check(y)?;
        self.check(r)?;
        let m = u64::from(*self.factors.iter().max().unwrap());
        let mut acc = 0u64;
        for (&n, &(off, w)) in self.factors.iter().zip(&self.spans) {
            let yd = u64::from(y.slice(off, w).value());
            let rd = u64::from(r.slice(off, w).value());
            acc = (acc + yd * rd * (m / u64::from(n))) % m;
        }
        Ok(acc == 0)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|n| n.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpec[{self}]")
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let factors: Vec<u32> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("invalid group factor `{t}`")))
            })
            .collect::<Result<_>>()?;
        GroupSpec::new(factors)
    }
}

/// A database-generating function as an explicit table: `2^n` output
/// values of `m` bits each, indexed by the input value.
#[derive(Clone, PartialEq, Eq)]
pub struct FunctionTable {
    n: u8,
    m: u8,
    entries: Vec<u32>,
}

impl FunctionTable {
    pub fn new(n: u8, m: u8, entries: Vec<u32>) -> Result<Self> {
        if n > MAX_GROUP_BITS {
            return Err(Error::GroupTooLarge(n));
        }
        if m == 0 || m > 8 {
            return Err(Error::InvalidConfig(format!("output width {m} not in 1..=8")));
        }
        if entries.len() != 1usize << n {
            return Err(Error::InvalidConfig(format!(
                "table needs {} entries, got {}",
                1usize << n,
                entries.len()
            )));
        }
        if let Some(v) = entries.iter().find(|&&v| v >= (1u32 << m)) {
            return Err(Error::WidthMismatch {
                expected: m,
                actual: (32 - v.leading_zeros()) as u8,
            });
        }
        Ok(FunctionTable { n, m, entries })
    }

    pub fn constant(n: u8, m: u8, value: u32) -> Result<Self> {
        FunctionTable::new(n, m, vec![value; 1usize << n])
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn m(&self) -> u8 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entry(&self, index: usize) -> u32 {
        self.entries[index]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn eval(&self, x: BitString) -> Result<BitString> {
        if x.width() != self.n {
            return Err(Error::WidthMismatch {
                expected: self.n,
                actual: x.width(),
            });
        }
        Ok(BitString::new(self.entries[x.index()], self.m))
    }

    pub fn rows(&self) -> impl Iterator<Item = (BitString, BitString)> + '_ {
        BitString::all(self.n).map(move |x| (x, BitString::new(self.entries[x.index()], self.m)))
    }

    /// Text form: one `<x bits>,<f bits>` line per entry, sorted by x.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (x, v) in self.rows() {
            out.push_str(&format!("{x},{v}\n"));
        }
        out
    }
}

impl fmt::Debug for FunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FunctionTable(n={}, m={}, {:?})", self.n, self.m, self.entries)
    }
}

impl FromStr for FunctionTable {
    type Err = Error;

    /// Parses the text form.  Lines starting with `#` and blank lines are
    /// ignored; the remaining lines must list every input exactly once in
    /// ascending order.
    fn from_str(s: &str) -> Result<Self> {
        let mut rows: Vec<(BitString, BitString)> = Vec::new();
        for (lineno, raw) in s.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (xs, vs) = line.split_once(',').ok_or_else(|| {
                Error::Parse(format!("line {}: expected `<x>,<f>`", lineno + 1))
            })?;
            rows.push((xs.trim().parse()?, vs.trim().parse()?));
        }
        let (first_x, first_v) = *rows
            .first()
            .ok_or_else(|| Error::Parse("empty function table".into()))?;
        let n = first_x.width();
        let m = first_v.width();
        if rows.len() != 1usize << n {
            return Err(Error::Parse(format!(
                "expected {} rows for {} input bits, got {}",
                1usize << n,
                n,
                rows.len()
            )));
        }
        let mut entries = vec![0u32; rows.len()];
        for (i, (x, v)) in rows.iter().enumerate() {
            if x.width() != n || v.width() != m {
                return Err(Error::Parse(format!("row {i}: inconsistent widths")));
            }
            if x.index() != i {
                return Err(Error::Parse(format!(
                    "rows must be sorted by x ascending; found {x} at position {i}"
                )));
            }
            entries[i] = v.value();
        }
        FunctionTable::new(n, m, entries)
    }
}

/// All non-identity elements `r` with `f(x) = f(x + r)` for every `x`,
/// found by direct enumeration.
pub fn all_periods(g: &GroupSpec, f: &FunctionTable) -> Result<Vec<BitString>> {
    if f.n() != g.n_bits() {
        return Err(Error::WidthMismatch {
            expected: g.n_bits(),
            actual: f.n(),
        });
    }
    let mut periods = Vec::new();
    for r in g.elements() {
        if r.is_zero() {
            continue;
        }
        let mut ok = true;
        for x in g.elements() {
            if f.entry(x.index()) != f.entry(g.add(x, r)?.index()) {
                ok = false;
                break;
            }
        }
        if ok {
            periods.push(r);
        }
    }
    Ok(periods)
}

/// The smallest non-identity period of `f` under `g`, or `None` when only
/// the identity leaves `f` invariant.
pub fn brute_force_period(g: &GroupSpec, f: &FunctionTable) -> Result<Option<BitString>> {
    Ok(all_periods(g, f)?.into_iter().next())
}

/// Synthesizes a random database that is constant on the cosets of the
/// subgroup generated by `period`, i.e. with that period planted.
pub fn planted_database(
    g: &GroupSpec,
    period: BitString,
    m: u8,
    seed: u64,
) -> Result<FunctionTable> {
    if period.width() != g.n_bits() {
        return Err(Error::WidthMismatch {
            expected: g.n_bits(),
            actual: period.width(),
        });
    }
    if period.is_zero() {
        return Err(Error::TrivialPeriod);
    }
    let subgroup = g.subgroup(period)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = vec![u32::MAX; g.order()];
    for x in g.elements() {
        if entries[x.index()] != u32::MAX {
            continue;
        }
        let value = rng.random_range(0..(1u32 << m));
        for h in &subgroup {
            entries[g.add(x, *h)?.index()] = value;
        }
    }
    FunctionTable::new(g.n_bits(), m, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    pub(crate) fn toy() -> FunctionTable {
        FunctionTable::new(2, 1, vec![1, 1, 0, 0]).unwrap()
    }

    #[test]
    fn add_is_xor_for_z2z2() {
        let g = GroupSpec::new(vec![2, 2]).unwrap();
        assert_eq!(g.add(bs("01"), bs("11")).unwrap(), bs("10"));
        for x in g.elements() {
            assert_eq!(g.add(bs("00"), x).unwrap(), x);
        }
    }

    #[test]
    fn add_is_mod4_for_z4() {
        let g = GroupSpec::new(vec![4]).unwrap();
        assert_eq!(g.add(bs("11"), bs("01")).unwrap(), bs("00"));
        assert_eq!(g.add(bs("10"), bs("01")).unwrap(), bs("11"));
    }

    #[test]
    fn mixed_radix_digits_msb_factor_first() {
        let g = GroupSpec::new(vec![2, 4]).unwrap();
        let x = bs("110");
        assert_eq!(g.digits(x).unwrap(), vec![1, 2]);
        assert_eq!(g.from_digits(&[1, 2]), x);
    }

    #[test]
    fn group_laws_exhaustive_small() {
        for factors in [
            vec![2],
            vec![4],
            vec![8],
            vec![2, 2],
            vec![2, 4],
            vec![4, 2],
            vec![2, 2, 2],
        ] {
            let g = GroupSpec::new(factors).unwrap();
            for a in g.elements() {
                for b in g.elements() {
                    assert_eq!(g.add(a, b).unwrap(), g.add(b, a).unwrap());
                    for c in g.elements() {
                        let lhs = g.add(g.add(a, b).unwrap(), c).unwrap();
                        let rhs = g.add(a, g.add(b, c).unwrap()).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn subgroup_examples() {
        let z2z2 = GroupSpec::new(vec![2, 2]).unwrap();
        assert_eq!(z2z2.subgroup(bs("01")).unwrap(), vec![bs("00"), bs("01")]);

        let z4 = GroupSpec::new(vec![4]).unwrap();
        assert_eq!(z4.subgroup(bs("10")).unwrap(), vec![bs("00"), bs("10")]);
        assert_eq!(
            z4.subgroup(bs("01")).unwrap(),
            vec![bs("00"), bs("01"), bs("10"), bs("11")]
        );
    }

    #[test]
    fn subgroup_size_is_element_order() {
        for factors in [vec![8], vec![2, 4], vec![2, 2, 2]] {
            let g = GroupSpec::new(factors).unwrap();
            for r in g.elements() {
                let mut k = 1usize;
                let mut cur = r;
                while cur != g.identity() {
                    cur = g.add(cur, r).unwrap();
                    k += 1;
                }
                assert_eq!(g.element_order(r).unwrap(), k);
                assert_eq!(g.subgroup(r).unwrap().len(), k);
                assert_eq!(g.order() % k, 0);
            }
        }
    }

    #[test]
    fn brute_force_period_toy() {
        let z2z2 = GroupSpec::new(vec![2, 2]).unwrap();
        assert_eq!(brute_force_period(&z2z2, &toy()).unwrap(), Some(bs("01")));

        let z4 = GroupSpec::new(vec![4]).unwrap();
        assert_eq!(brute_force_period(&z4, &toy()).unwrap(), None);
    }

    #[test]
    fn brute_force_period_constant() {
        for factors in [vec![2, 2], vec![4], vec![2, 2, 2]] {
            let g = GroupSpec::new(factors).unwrap();
            let f = FunctionTable::constant(g.n_bits(), 1, 1).unwrap();
            let r = brute_force_period(&g, &f).unwrap().unwrap();
            assert_eq!(r.value(), 1, "smallest non-identity element");
        }
    }

    #[test]
    fn periods_satisfy_defining_relation() {
        let g = GroupSpec::new(vec![2, 4]).unwrap();
        for seed in 0..20 {
            let period = BitString::new(1 + seed % 7, 3);
            let f = planted_database(&g, period, 2, seed.into()).unwrap();
            for r in all_periods(&g, &f).unwrap() {
                for x in g.elements() {
                    assert_eq!(
                        f.entry(x.index()),
                        f.entry(g.add(x, r).unwrap().index())
                    );
                }
            }
            // the planted element itself must be among the periods
            assert!(all_periods(&g, &f).unwrap().contains(&period));
        }
    }

    #[test]
    fn annihilates_matches_dot_products() {
        let z2z2 = GroupSpec::new(vec![2, 2]).unwrap();
        for y in z2z2.elements() {
            for r in z2z2.elements() {
                let dot = (y.bit(0) & r.bit(0)) ^ (y.bit(1) & r.bit(1));
                assert_eq!(z2z2.annihilates(y, r).unwrap(), dot == 0);
            }
        }
        let z4 = GroupSpec::new(vec![4]).unwrap();
        for y in z4.elements() {
            for r in z4.elements() {
                assert_eq!(
                    z4.annihilates(y, r).unwrap(),
                    (y.value() * r.value()) % 4 == 0
                );
            }
        }
    }

    #[test]
    fn table_text_round_trip() {
        let f = toy();
        let text = f.to_text();
        assert_eq!(text, "00,1\n01,1\n10,0\n11,0\n");
        let parsed: FunctionTable = text.parse().unwrap();
        assert_eq!(parsed, f);

        let commented = "# toy database\n00,1\n01,1\n\n10,0\n11,0\n";
        assert_eq!(commented.parse::<FunctionTable>().unwrap(), f);
    }

    #[test]
    fn table_parse_rejects_unsorted_and_partial() {
        assert!("00,1\n10,0\n01,1\n11,0\n".parse::<FunctionTable>().is_err());
        assert!("00,1\n01,1\n".parse::<FunctionTable>().is_err());
        assert!("00,1\n01,11\n10,0\n11,0\n".parse::<FunctionTable>().is_err());
    }

    #[test]
    fn spec_rejects_bad_factors() {
        assert!(GroupSpec::new(vec![3]).is_err());
        assert!(GroupSpec::new(vec![2, 6]).is_err());
        assert!(GroupSpec::new(vec![]).is_err());
        assert!(GroupSpec::new(vec![2; 13]).is_err());
    }

    #[test]
    fn group_spec_string_round_trip() {
        let g: GroupSpec = "2,4".parse().unwrap();
        assert_eq!(g.factors(), &[2, 4]);
        assert_eq!(g.to_string(), "2,4");
        assert!("2,five".parse::<GroupSpec>().is_err());
    }
}
