use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Parent name that marks a node as the root.
pub const ROOT_MARKER: &str = "ROOT";

/// A tree of concepts given as `child -> parent` edges. The root sits at
/// depth 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Taxonomy {
    parent: BTreeMap<String, String>,
    depth: BTreeMap<String, usize>,
    root: String,
}

impl Taxonomy {
    /// Build from edges. A child listed twice keeps its first parent.
    /// Exactly one node may lack a parent; it may also be declared with the
    /// parent [`ROOT_MARKER`].
    pub fn from_edges<S: AsRef<str>>(edges: &[(S, S)]) -> Result<Self> {
        let mut parent: BTreeMap<String, String> = BTreeMap::new();
        let mut declared: Vec<String> = Vec::new();
        for (c, p) in edges {
            let (c, p) = (c.as_ref(), p.as_ref());
            if c == p {
                return Err(Error::Input(format!("taxonomy node {c:?} is its own parent")));
            }
            if p == ROOT_MARKER {
                declared.push(c.into());
                continue;
            }
            parent.entry(c.into()).or_insert_with(|| p.into());
        }
        if let Some(d) = declared.iter().find(|d| parent.contains_key(*d)) {
            return Err(Error::Input(format!("declared root {d:?} also has a parent")));
        }
        let mut roots: Vec<&String> = parent
            .values()
            .filter(|p| !parent.contains_key(*p))
            .chain(declared.iter())
            .collect();
        roots.sort();
        roots.dedup();
        let root = match roots.as_slice() {
            [r] => (*r).clone(),
            [] => return Err(Error::Input("taxonomy has no root (cycle)".into())),
            many => {
                return Err(Error::Input(format!(
                    "taxonomy has {} roots: {:?}",
                    many.len(),
                    many
                )))
            }
        };
        let mut depth = BTreeMap::new();
        depth.insert(root.clone(), 1);
        for node in parent.keys() {
            let mut chain = Vec::new();
            let mut cur = node.as_str();
            while !depth.contains_key(cur) {
                if chain.len() > parent.len() {
                    return Err(Error::Input(format!("taxonomy cycle through {node:?}")));
                }
                chain.push(cur);
                cur = &parent[cur];
            }
            let mut d = depth[cur];
            for n in chain.into_iter().rev() {
                d += 1;
                depth.insert(n.into(), d);
            }
        }
        Ok(Self { parent, depth, root })
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn contains(&self, node: &str) -> bool {
        self.depth.contains_key(node)
    }

    pub fn depth(&self, node: &str) -> Option<usize> {
        self.depth.get(node).copied()
    }

    pub fn len(&self) -> usize {
        self.depth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depth.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.parent.iter().map(|(c, p)| (c.as_str(), p.as_str()))
    }

    fn ancestors<'a>(&'a self, node: &'a str) -> impl Iterator<Item = &'a str> {
        core::iter::successors(Some(node), move |n| self.parent.get(*n).map(String::as_str))
    }

    /// Deepest node that is an ancestor of (or equal to) both.
    pub fn lowest_common_ancestor(&self, a: &str, b: &str) -> Result<&str> {
        for n in [a, b] {
            if !self.contains(n) {
                return Err(Error::lookup("taxonomy node", n));
            }
        }
        let of_a: Vec<&str> = self.ancestors(a).collect();
        Ok(self
            .ancestors(b)
            .find(|n| of_a.contains(n))
            .map(|n| self.depth.get_key_value(n).unwrap().0.as_str())
            .unwrap_or(&self.root))
    }

    /// Wu-Palmer similarity `2 d(lcs) / (d(a) + d(b))`.
    pub fn wup(&self, a: &str, b: &str) -> Result<f64> {
        let lcs = self.lowest_common_ancestor(a, b)?;
        let d = |n: &str| self.depth[n] as f64;
        Ok(2.0 * d(lcs) / (d(a) + d(b)))
    }
}
