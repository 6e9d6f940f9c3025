//! Conjugacy classes of a tabulated group.

use serde::{Deserialize, Serialize};

use crate::cyclo::lcm;
use crate::error::{Error, Result};
use crate::group::GroupTable;

/// Above this order a greedy generating set is used for the orbit search
/// instead of all elements.
const ALL_ELEMENTS_BELOW: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassData {
    pub group_key: String,
    pub group_order: u64,
    /// Class index of every element id.
    pub class_of: Vec<u32>,
    /// Smallest element id of each class; class 0 is the identity.
    pub reps: Vec<u32>,
    pub sizes: Vec<u64>,
    /// Class of the inverses.
    pub inverse_class: Vec<u32>,
    /// Element order of each class.
    pub orders: Vec<u32>,
    /// `powers[c][i]` is the class of `g^i` for the representative `g`,
    /// `0 <= i < orders[c]`.
    pub powers: Vec<Vec<u32>>,
    /// Least common multiple of the element orders.
    pub exponent: u32,
}

impl ClassData {
    pub fn count(&self) -> usize {
        self.reps.len()
    }

    /// Centralizer order of an element of class `c`.
    pub fn centralizer_order(&self, c: usize) -> u64 {
        self.group_order / self.sizes[c]
    }
}

/// A generating set chosen greedily in id order: an element is taken when it
/// lies outside the subgroup generated so far.
pub fn generating_set(table: &GroupTable) -> Vec<u32> {
    let order = table.order();
    let mut inside = vec![false; order];
    inside[0] = true;
    let mut members = vec![0u32];
    let mut gens = Vec::new();
    for cand in 1..order as u32 {
        if inside[cand as usize] {
            continue;
        }
        gens.push(cand);
        // closure: right-multiply every member by every generator until stable
        let mut frontier = members.clone();
        while let Some(h) = frontier.pop() {
            for &g in &gens {
                let x = table.mul(h, g);
                if !inside[x as usize] {
                    inside[x as usize] = true;
                    members.push(x);
                    frontier.push(x);
                }
            }
        }
        if members.len() == order {
            break;
        }
    }
    gens
}

pub fn conjugacy_classes(table: &GroupTable, cap: u64) -> Result<ClassData> {
    let order = table.order();
    if order as u64 > cap {
        return Err(Error::CapExceeded { order: order as u64, cap });
    }
    let gens: Vec<u32> = if order < ALL_ELEMENTS_BELOW {
        (1..order as u32).collect()
    } else {
        generating_set(table)
    };
    Ok(classes_under(table, &gens))
}

/// Orbits of conjugation by the subgroup generated by `gens`.
fn classes_under(table: &GroupTable, gens: &[u32]) -> ClassData {
    let order = table.order();
    const NONE: u32 = u32::MAX;
    let mut class_of = vec![NONE; order];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    for start in 0..order as u32 {
        if class_of[start as usize] != NONE {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(start);
        class_of[start as usize] = c;
        let mut stack = vec![start];
        let mut size = 1u64;
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = table.conj(g, x);
                if class_of[y as usize] == NONE {
                    class_of[y as usize] = c;
                    size += 1;
                    stack.push(y);
                }
            }
        }
        sizes.push(size);
    }
    let inverse_class = reps.iter().map(|&r| class_of[table.inv(r) as usize]).collect();
    let mut orders = Vec::with_capacity(reps.len());
    let mut powers = Vec::with_capacity(reps.len());
    for &r in &reps {
        let mut p = vec![0u32];
        let mut x = r;
        while x != 0 {
            p.push(class_of[x as usize]);
            x = table.mul(x, r);
        }
        orders.push(p.len() as u32);
        powers.push(p);
    }
    let exponent = orders.iter().fold(1u64, |e, &o| lcm(e, o as u64)) as u32;
    ClassData {
        group_key: table.spec.key(),
        group_order: order as u64,
        class_of,
        reps,
        sizes,
        inverse_class,
        orders,
        powers,
        exponent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Family, GroupSpec, DEFAULT_TABLE_CAP};

    fn table(f: Family, n: usize, r: &str) -> GroupTable {
        GroupTable::build(&GroupSpec::new(f, n, r.parse().unwrap()).unwrap(), DEFAULT_TABLE_CAP).unwrap()
    }

    /// Classes by brute force: `x ~ y` iff some `g` has `g x g^-1 = y`.
    fn brute_class_count(t: &GroupTable) -> usize {
        let n = t.order() as u32;
        let mut seen = vec![false; n as usize];
        let mut count = 0;
        for x in 0..n {
            if seen[x as usize] {
                continue;
            }
            count += 1;
            for g in 0..n {
                seen[t.conj(g, x) as usize] = true;
            }
        }
        count
    }

    #[test]
    fn small_examples() {
        let s3 = table(Family::GL, 2, "mixed:2^1");
        let cd = conjugacy_classes(&s3, 1000).unwrap();
        let mut sizes = cd.sizes.clone();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(cd.reps[0], 0);
        assert_eq!(cd.exponent, 6);
        let sl = table(Family::SL, 2, "mixed:3^1");
        assert_eq!(conjugacy_classes(&sl, 1000).unwrap().count(), 7);
        let gl = table(Family::GL, 2, "mixed:2^2");
        let cd = conjugacy_classes(&gl, 1000).unwrap();
        assert_eq!(cd.sizes.iter().sum::<u64>(), 96);
        assert_eq!(cd.count(), brute_class_count(&gl));
        assert!(conjugacy_classes(&gl, 50).is_err());
    }

    #[test]
    fn class_data_is_consistent() {
        let t = table(Family::SL, 2, "mixed:3^2");
        let cd = conjugacy_classes(&t, 100_000).unwrap();
        assert_eq!(cd.count(), brute_class_count(&t));
        for (c, &r) in cd.reps.iter().enumerate() {
            assert_eq!(cd.class_of[r as usize] as usize, c);
            assert_eq!(cd.class_of[t.inv(r) as usize], cd.inverse_class[c]);
            assert_eq!(cd.powers[c].len(), cd.orders[c] as usize);
            if c > 0 {
                assert_eq!(cd.powers[c][1] as usize, c);
            }
        }
        // reps are the least ids of their classes
        for (id, &c) in cd.class_of.iter().enumerate() {
            assert!(cd.reps[c as usize] as usize <= id);
        }
    }

    #[test]
    fn generator_orbits_match_full_orbits() {
        for (f, r) in [(Family::GL, "mixed:2^2"), (Family::SL, "mixed:3^2"), (Family::GL, "equal:2^2")] {
            let t = table(f, 2, r);
            let full = conjugacy_classes(&t, 100_000).unwrap();
            let gens = generating_set(&t);
            assert!(gens.len() < 8);
            assert_eq!(classes_under(&t, &gens), full);
        }
    }
}
