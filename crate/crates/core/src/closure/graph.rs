//! The graph of rational preperiodic points and its canonical form.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::preimages::rational_preimages;
use crate::error::{Error, Result};
use crate::global::periodic::PeriodicPointSet;
use crate::poly::map::HomogeneousMap;
use crate::poly::point::RationalProjPoint;

/// Largest graph `classify_structure` accepts.
pub const MAX_CLASSIFY_NODES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphNode {
    pub point: RationalProjPoint,
    pub preperiod: u64,
    pub period: u64,
    /// Index of `f(point)` in the node list.
    pub image: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub cycle_length: u64,
    pub size: usize,
    /// Smallest point on the cycle.
    pub cycle_start: RationalProjPoint,
}

/// Nodes sorted by point; components sorted by size, then cycle length, descending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreperiodicGraph {
    pub nodes: Vec<GraphNode>,
    pub components: Vec<Component>,
}

impl PreperiodicGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, p: &RationalProjPoint) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.point.cmp(p)).ok()
    }

    /// One entry per cycle, descending.
    pub fn cycle_lengths(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.components.iter().map(|c| c.cycle_length).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// Component sizes, descending.
    pub fn component_sizes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.components.iter().map(|c| c.size).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    pub fn periodic_points(&self) -> PeriodicPointSet {
        PeriodicPointSet { points: self.nodes.iter().filter(|n| n.preperiod == 0).map(|n| (n.point.clone(), n.period)).collect() }
    }

    pub fn edges(&self) -> impl Iterator<Item = (&RationalProjPoint, &RationalProjPoint)> {
        self.nodes.iter().map(|n| (&n.point, &self.nodes[n.image].point))
    }
}

/// Closes `periodic` under rational preimages. Each round queries the new
/// points in parallel and merges the results in sorted order.
pub fn preperiodic_closure(f: &HomogeneousMap, periodic: &PeriodicPointSet) -> Result<PreperiodicGraph> {
    let mut all: BTreeSet<RationalProjPoint> = periodic.points.keys().cloned().collect();
    let mut frontier: Vec<RationalProjPoint> = all.iter().cloned().collect();
    while !frontier.is_empty() {
        let found: Vec<BTreeSet<RationalProjPoint>> = frontier.par_iter().map(|p| rational_preimages(f, p)).collect::<Result<_>>()?;
        let mut next = BTreeSet::new();
        for q in found.into_iter().flatten() {
            if !all.contains(&q) {
                next.insert(q);
            }
        }
        all.extend(next.iter().cloned());
        frontier = next.into_iter().collect();
    }
    assemble(f, &all, periodic)
}

fn assemble(f: &HomogeneousMap, all: &BTreeSet<RationalProjPoint>, periodic: &PeriodicPointSet) -> Result<PreperiodicGraph> {
    let pts: Vec<RationalProjPoint> = all.iter().cloned().collect();
    let index: BTreeMap<&RationalProjPoint, usize> = pts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut image = Vec::with_capacity(pts.len());
    for p in &pts {
        let q = f.evaluate(p)?;
        let Some(&j) = index.get(&q) else {
            return Err(Error::Degeneracy(format!("image {} of {} is not preperiodic", q, p)));
        };
        image.push(j);
    }
    let mut nodes = Vec::with_capacity(pts.len());
    for (i, p) in pts.iter().enumerate() {
        let mut m = 0u64;
        let mut j = i;
        while !periodic.points.contains_key(&pts[j]) {
            j = image[j];
            m += 1;
            if m as usize > pts.len() {
                return Err(Error::Degeneracy(format!("{} does not reach a cycle", p)));
            }
        }
        nodes.push(GraphNode { point: p.clone(), preperiod: m, period: periodic.points[&pts[j]], image: image[i] });
    }
    // components via the cycle each node falls into
    let mut comp_of_cycle: BTreeMap<usize, (u64, usize)> = BTreeMap::new();
    for i in 0..nodes.len() {
        let mut j = i;
        for _ in 0..nodes[i].preperiod {
            j = image[j];
        }
        // smallest index on the cycle identifies it
        let mut start = j;
        let mut k = image[j];
        while k != j {
            start = start.min(k);
            k = image[k];
        }
        comp_of_cycle.entry(start).or_insert((nodes[start].period, 0)).1 += 1;
    }
    let mut components: Vec<Component> =
        comp_of_cycle.into_iter().map(|(s, (n, size))| Component { cycle_length: n, size, cycle_start: pts[s].clone() }).collect();
    components.sort_by(|a, b| b.size.cmp(&a.size).then(b.cycle_length.cmp(&a.cycle_length)).then(a.cycle_start.cmp(&b.cycle_start)));
    Ok(PreperiodicGraph { nodes, components })
}

/// A string determining the graph up to isomorphism: every component is the
/// least rotation of its cycle, each cycle point carrying its tree of
/// preimages in sorted nested form.
pub fn classify_structure(g: &PreperiodicGraph) -> Result<String> {
    if g.len() > MAX_CLASSIFY_NODES {
        return Err(Error::Resource(format!("structure classification is limited to {} nodes, graph has {}", MAX_CLASSIFY_NODES, g.len())));
    }
    let n = g.len();
    let mut preimages: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, node) in g.nodes.iter().enumerate() {
        if node.preperiod > 0 {
            preimages[node.image].push(i);
        }
    }
    fn tree(v: usize, pre: &[Vec<usize>]) -> String {
        let mut kids: Vec<String> = pre[v].iter().map(|&c| tree(c, pre)).collect();
        kids.sort();
        format!("({})", kids.concat())
    }
    let mut comps: Vec<(u64, String)> = Vec::new();
    for c in &g.components {
        let start = g.index_of(&c.cycle_start).unwrap();
        let mut cycle = vec![start];
        let mut k = g.nodes[start].image;
        while k != start {
            cycle.push(k);
            k = g.nodes[k].image;
        }
        let trees: Vec<String> = cycle.iter().map(|&v| tree(v, &preimages)).collect();
        let best = (0..trees.len()).map(|r| trees[r..].iter().chain(&trees[..r]).cloned().collect::<Vec<_>>().join(",")).min().unwrap();
        comps.push((c.cycle_length, format!("C{}[{}]", c.cycle_length, best)));
    }
    comps.sort();
    Ok(comps.into_iter().map(|(_, s)| s).collect::<Vec<_>>().join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::global::oracle::{brute_force_preperiodic_oracle, periodic_part};
    use crate::poly::parse::parse_map;

    fn graph(m: &str, cap: i64) -> (HomogeneousMap, PreperiodicGraph) {
        let f = parse_map(m).unwrap();
        let oracle = brute_force_preperiodic_oracle(&f, cap).unwrap();
        let g = preperiodic_closure(&f, &PeriodicPointSet { points: periodic_part(&oracle) }).unwrap();
        (f, g)
    }

    #[test]
    fn worked_example() {
        let (_, g) = graph("z^2 - 7/4", 4);
        assert_eq!(g.len(), 5);
        assert_eq!(g.component_sizes(), [4, 1]);
        assert_eq!(g.cycle_lengths(), [2, 1]);
        let i = g.index_of(&RationalProjPoint::from_ints(&[3, 2])).unwrap();
        assert_eq!((g.nodes[i].preperiod, g.nodes[i].period), (1, 2));
        let j = g.index_of(&RationalProjPoint::from_ints(&[-1, 2])).unwrap();
        assert_eq!((g.nodes[j].preperiod, g.nodes[j].period), (1, 2));
        assert_eq!(classify_structure(&g).unwrap(), "C1[()] C2[(()),(())]");
    }

    #[test]
    fn closure_is_a_fixed_point() {
        let (f, g) = graph("z^2 - 29/16", 8);
        assert_eq!(g.len(), 9);
        assert_eq!(g.cycle_lengths(), [3, 1]);
        assert_eq!(g.component_sizes(), [8, 1]);
        let again = preperiodic_closure(&f, &g.periodic_points()).unwrap();
        assert_eq!(again, g);
        let cyc = g.nodes.iter().filter(|n| n.preperiod == 0).count() as u64;
        assert_eq!(cyc, g.cycle_lengths().iter().sum::<u64>());
    }

    #[test]
    fn structures() {
        let (_, cube) = graph("z^3", 2);
        assert_eq!(classify_structure(&cube).unwrap(), "C1[()] C1[()] C1[()] C1[()]");
        let (_, a) = graph("z^2 - 7/4", 4);
        // conjugate by z -> -z: -(z^2 - 7/4)
        let (_, b) = graph("7/4 - z^2", 4);
        assert_eq!(classify_structure(&a).unwrap(), classify_structure(&b).unwrap());
        let (_, s) = graph("z^2", 4);
        let (_, t) = graph("z^2 - 1", 4);
        assert_ne!(classify_structure(&s).unwrap(), classify_structure(&t).unwrap());
    }
}
