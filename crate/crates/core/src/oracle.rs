//! Breadth-first search over the Cayley graph of `U` with respect to the
//! simple root generators `ε_{α_i}(±1)`.
//!
//! States are keyed by the lead entries of the matrix (one per positive
//! root), packed base `p` into a dense index below `|U|`.

use serde::Serialize;

use crate::chevalley::Realization;
use crate::error::{Error, Result};
use crate::field::Modulus;
use crate::matrix::FpMatrix;
use crate::root_system::RootSystem;

/// Default ceiling on `|U|` for exhaustive search.
pub const DEFAULT_STATE_CAP: u128 = 50_000_000;

const UNSEEN: u16 = u16::MAX;

/// Sphere sizes `v(0), v(1), ..., v(D)` of the word metric.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphereProfile {
    #[serde(rename = "type")]
    pub lie_type: char,
    pub n: usize,
    pub p: u64,
    pub counts: Vec<u64>,
    pub diameter: usize,
    pub order: u128,
}

impl SphereProfile {
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# type={} n={} p={} diameter={} order={}\nm,count\n",
            self.lie_type, self.n, self.p, self.diameter, self.order
        );
        for (m, c) in self.counts.iter().enumerate() {
            out.push_str(&format!("{m},{c}\n"));
        }
        out
    }
}

/// `p^{|Φ⁺|}`, saturating.
pub fn group_order(rs: &RootSystem, p: u64) -> u128 {
    (p as u128).checked_pow(rs.len() as u32).unwrap_or(u128::MAX)
}

/// Minimal word length of every element of `U`.
#[derive(Clone, Debug)]
pub struct LengthTable {
    real: Realization,
    dist: Vec<u16>,
    counts: Vec<u64>,
}

impl LengthTable {
    /// Exhaustive BFS from the identity. Fails when `|U|` exceeds `cap`.
    pub fn build(rs: &RootSystem, p: u64, cap: u128) -> Result<Self> {
        let md = Modulus::new(p)?;
        let order = group_order(rs, p);
        if order > cap || order > usize::MAX as u128 {
            return Err(Error::Infeasible { order, cap });
        }
        let real = Realization::new(rs, md);
        let mut dist = vec![UNSEEN; order as usize];
        let gens: Vec<(usize, u64)> = (1..=rs.rank())
            .flat_map(|i| [(rs.simple_id(i), 1), (rs.simple_id(i), p - 1)])
            .collect();
        let start = real.identity();
        dist[pack(&real.lead_entries(&start), p)] = 0;
        let mut counts = vec![1u64];
        let mut frontier = vec![start];
        let mut depth: u16 = 0;
        while !frontier.is_empty() {
            if depth == UNSEEN - 1 {
                return Err(Error::Infeasible { order, cap: UNSEEN as u128 });
            }
            depth += 1;
            let mut next = Vec::new();
            for m in &frontier {
                for &(id, c) in &gens {
                    let mut w = m.clone();
                    real.mul_root_right(&mut w, id, c);
                    let key = pack(&real.lead_entries(&w), p);
                    if dist[key] == UNSEEN {
                        dist[key] = depth;
                        next.push(w);
                    }
                }
            }
            if !next.is_empty() {
                counts.push(next.len() as u64);
            }
            frontier = next;
        }
        Ok(LengthTable { real, dist, counts })
    }

    pub fn realization(&self) -> &Realization {
        &self.real
    }

    pub fn order(&self) -> u128 {
        self.dist.len() as u128
    }

    pub fn diameter(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Minimal length of `u`, which must lie in `U` over the same field.
    pub fn length(&self, u: &FpMatrix) -> Result<usize> {
        if u.p() != self.real.modulus().value() || u.dim() != self.real.dim() {
            return Err(Error::Mismatch("element does not match this realization".into()));
        }
        let back = self.real.ordered_product(&self.real.row_order(), &self.coords_of(u)?);
        if back != *u {
            return Err(Error::NotInGroup("not a product of positive root elements".into()));
        }
        Ok(self.dist[pack(&self.real.lead_entries(u), u.p())] as usize)
    }

    fn coords_of(&self, u: &FpMatrix) -> Result<Vec<u64>> {
        self.real.coordinates_in_order(u, &self.real.row_order())
    }

    pub fn profile(&self) -> SphereProfile {
        let rs = self.real.root_system();
        SphereProfile {
            lie_type: rs.lie_type().label(),
            n: rs.rank(),
            p: self.real.modulus().value(),
            counts: self.counts.clone(),
            diameter: self.diameter(),
            order: self.order(),
        }
    }

    /// Visits every element with its minimal length.
    pub fn for_each_element(&self, mut f: impl FnMut(&FpMatrix, usize) -> Result<()>) -> Result<()> {
        let rs = self.real.root_system();
        let p = self.real.modulus().value();
        let order = self.real.row_order();
        let mut coords = vec![0u64; rs.len()];
        loop {
            let u = self.real.ordered_product(&order, &coords);
            let d = self.dist[pack(&self.real.lead_entries(&u), p)];
            f(&u, d as usize)?;
            // Odometer over all coordinate tuples.
            let mut k = 0;
            loop {
                if k == coords.len() {
                    return Ok(());
                }
                coords[k] += 1;
                if coords[k] < p {
                    break;
                }
                coords[k] = 0;
                k += 1;
            }
        }
    }
}

fn pack(lead: &[u64], p: u64) -> usize {
    lead.iter().rev().fold(0usize, |acc, &v| acc * p as usize + v as usize)
}

/// Sphere profile of `U` over `Z/p`.
pub fn bfs_spheres(rs: &RootSystem, p: u64, cap: u128) -> Result<SphereProfile> {
    Ok(LengthTable::build(rs, p, cap)?.profile())
}

/// Minimal word length of `u` by exhaustive search.
pub fn exact_length(rs: &RootSystem, p: u64, u: &FpMatrix, cap: u128) -> Result<usize> {
    LengthTable::build(rs, p, cap)?.length(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::{LieType, Root};

    fn table(lt: LieType, n: usize, p: u64) -> LengthTable {
        let rs = RootSystem::new(lt, n).unwrap();
        LengthTable::build(&rs, p, DEFAULT_STATE_CAP).unwrap()
    }

    #[test]
    fn a1_is_a_cycle() {
        let prof = table(LieType::A, 1, 7).profile();
        assert_eq!(prof.counts, vec![1, 2, 2, 2]);
        assert_eq!(prof.diameter, 3);
        assert_eq!(prof.order, 7);
    }

    #[test]
    fn a2_p3_profile() {
        let prof = table(LieType::A, 2, 3).profile();
        assert_eq!(prof.order, 27);
        assert_eq!(prof.counts.iter().sum::<u64>(), 27);
        assert_eq!(&prof.counts[..2], &[1, 4]);
        assert_eq!(prof.counts, vec![1, 4, 8, 12, 2]);
    }

    #[test]
    fn b2_and_c2_p3_orders() {
        for lt in [LieType::B, LieType::C] {
            let prof = table(lt, 2, 3).profile();
            assert_eq!(prof.order, 81);
            assert_eq!(prof.counts.iter().sum::<u64>(), 81);
            assert_eq!(prof.counts[1], 4);
        }
    }

    #[test]
    fn lengths_of_simple_elements() {
        let t = table(LieType::A, 2, 5);
        let real = t.realization();
        assert_eq!(t.length(&real.identity()).unwrap(), 0);
        let rs = real.root_system();
        let gen = real.root_element(&rs.simple_root(1), 1).unwrap();
        assert_eq!(t.length(&gen).unwrap(), 1);
        let top = real.root_element(&Root::new(vec![1, 1]), 1).unwrap();
        assert!(t.length(&top).unwrap() >= 2);
    }

    #[test]
    fn rejects_large_instances() {
        let rs = RootSystem::new(LieType::A, 4).unwrap();
        let err = LengthTable::build(&rs, 101, DEFAULT_STATE_CAP).unwrap_err();
        assert_eq!(err, Error::Infeasible { order: 101u128.pow(10), cap: DEFAULT_STATE_CAP });
    }

    #[test]
    fn element_walk_matches_counts() {
        let t = table(LieType::C, 2, 3);
        let mut hist = vec![0u64; t.diameter() + 1];
        t.for_each_element(|_, d| {
            hist[d] += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(hist, t.counts());
    }

    #[test]
    fn csv_has_header_and_rows() {
        let csv = table(LieType::A, 1, 5).profile().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# type=A n=1 p=5 diameter=2 order=5");
        assert_eq!(lines[1], "m,count");
        assert_eq!(lines.len(), 5);
    }
}
