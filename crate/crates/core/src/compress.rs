//! Coset de-duplication of function tables.
//!
//! A table whose generating function has a period `r` repeats each value
//! across the whole coset of the subgroup generated by `r`.  Compression
//! keeps one `(representative, value)` pair per coset; the (group, period)
//! pair is the only bookkeeping needed to recompute the cover, so the
//! compressed form carries no explicit duplicate index.
//!
//! Compression never fails on a wrong period: it silently keeps the
//! lexicographically smallest member of each (now mixed-value) coset and
//! the reconstruction error becomes the training signal upstream.

use std::fmt;
use std::str::FromStr;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::groups::{FunctionTable, GroupSpec};
use crate::hsg::SymmetryHypothesis;

/// De-duplicated table: one entry per coset of the subgroup generated by
/// `period`, keyed by the smallest coset member.
#[derive(Clone, Debug, PartialEq)]
pub struct CompressedDatabase {
    pub group: GroupSpec,
    pub period: BitString,
    pub n: u8,
    pub m: u8,
    pub representatives: Vec<(BitString, BitString)>,
}

fn coset_representative(g: &GroupSpec, subgroup: &[BitString], x: BitString) -> Result<BitString> {
    let mut rep = x;
    for &h in subgroup {
        let y = g.add(x, h)?;
        if y < rep {
            rep = y;
        }
    }
    Ok(rep)
}

/// Compresses `db` under the hypothesized symmetry.
pub fn compress(db: &FunctionTable, hyp: &SymmetryHypothesis) -> Result<CompressedDatabase> {
    let period = hyp.period.ok_or(Error::TrivialPeriod)?;
    if period.is_zero() {
        return Err(Error::TrivialPeriod);
    }
    let g = &hyp.group;
    if db.n() != g.n_bits() {
        return Err(Error::WidthMismatch {
            expected: g.n_bits(),
            actual: db.n(),
        });
    }
    let subgroup = g.subgroup(period)?;
    let mut representatives = Vec::new();
    for x in g.elements() {
        if coset_representative(g, &subgroup, x)? == x {
            representatives.push((x, db.eval(x)?));
        }
    }
    debug_assert_eq!(representatives.len() * subgroup.len(), g.order());
    Ok(CompressedDatabase {
        group: g.clone(),
        period,
        n: db.n(),
        m: db.m(),
        representatives,
    })
}

/// Rebuilds the full table by copying each representative's value across
/// its coset.  Total for any well-formed compressed database, including
/// ones built from a wrong period.
pub fn reconstruct(cdb: &CompressedDatabase) -> Result<FunctionTable> {
    let g = &cdb.group;
    let subgroup = g.subgroup(cdb.period)?;
    let mut entries = vec![u32::MAX; g.order()];
    for &(rep, value) in &cdb.representatives {
        for &h in &subgroup {
            entries[g.add(rep, h)?.index()] = value.value();
        }
    }
    if let Some(idx) = entries.iter().position(|&v| v == u32::MAX) {
        return Err(Error::BadCosetCover(
            BitString::new(idx as u32, cdb.n).to_string(),
        ));
    }
    FunctionTable::new(cdb.n, cdb.m, entries)
}

/// Value at `x`, resolved through group arithmetic without materializing
/// the full table.
pub fn lookup(cdb: &CompressedDatabase, x: BitString) -> Result<BitString> {
    let g = &cdb.group;
    if x.width() != g.n_bits() {
        return Err(Error::WidthMismatch {
            expected: g.n_bits(),
            actual: x.width(),
        });
    }
    let subgroup = g.subgroup(cdb.period)?;
    let rep = coset_representative(g, &subgroup, x)?;
    match cdb.representatives.binary_search_by_key(&rep, |&(r, _)| r) {
        Ok(i) => Ok(cdb.representatives[i].1),
        Err(_) => Err(Error::BadCosetCover(rep.to_string())),
    }
}

impl CompressedDatabase {
    /// Text form: `group=`, `period=`, `n=`, `m=` headers, then one
    /// `<rep bits>,<value bits>` line per coset, sorted by representative.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("group={}\n", self.group));
        out.push_str(&format!("period={}\n", self.period));
        out.push_str(&format!("n={}\n", self.n));
        out.push_str(&format!("m={}\n", self.m));
        for (rep, value) in &self.representatives {
            out.push_str(&format!("{rep},{value}\n"));
        }
        out
    }
}

impl fmt::Display for CompressedDatabase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for CompressedDatabase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut group: Option<GroupSpec> = None;
        let mut period: Option<BitString> = None;
        let mut n: Option<u8> = None;
        let mut m: Option<u8> = None;
        let mut representatives = Vec::new();
        for raw in s.lines() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some((key, value)) = line.split_once('=') {
                match key.trim() {
                    "group" => group = Some(value.trim().parse()?),
                    "period" => period = Some(value.trim().parse()?),
                    "n" => {
                        n = Some(value.trim().parse().map_err(|_| {
                            Error::Parse(format!("bad n `{value}`"))
                        })?)
                    }
                    "m" => {
                        m = Some(value.trim().parse().map_err(|_| {
                            Error::Parse(format!("bad m `{value}`"))
                        })?)
                    }
                    other => {
                        return Err(Error::Parse(format!("unknown header `{other}`")));
                    }
                }
            } else {
                let (r, v) = line
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("expected `<rep>,<value>`: {line}")))?;
                representatives.push((r.trim().parse()?, v.trim().parse()?));
            }
        }
        let group = group.ok_or_else(|| Error::Parse("missing group= header".into()))?;
        let period = period.ok_or_else(|| Error::Parse("missing period= header".into()))?;
        let n = n.ok_or_else(|| Error::Parse("missing n= header".into()))?;
        let m = m.ok_or_else(|| Error::Parse("missing m= header".into()))?;
        if period.width() != group.n_bits() || n != group.n_bits() {
            return Err(Error::WidthMismatch {
                expected: group.n_bits(),
                actual: period.width(),
            });
        }
        if !representatives.windows(2).all(|w| w[0].0 < w[1].0) {
            return Err(Error::Parse("representatives must be sorted".into()));
        }
        Ok(CompressedDatabase {
            group,
            period,
            n,
            m,
            representatives,
        })
    }
}
