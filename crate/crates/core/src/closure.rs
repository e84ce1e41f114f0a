//! Breadth-first closure of a generating set inside a matrix group, with a Schreier tree.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::matrix::{KeyCodec, Matrix};
use crate::matrix_groups::GroupLike;

enum Store {
    Packed(KeyCodec, Vec<u128>, FxHashMap<u128, u32>),
    Plain(Vec<Matrix>, FxHashMap<Matrix, u32>),
}

/// Elements in BFS order; element 0 is the identity. `parent[i] = (j, s)` means
/// element i = element j * generator s.
pub struct Closure {
    store: Store,
    pub parent: Vec<(u32, u16)>,
    pub depth: Vec<u16>,
}

impl Closure {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn get(&self, i: usize) -> Matrix {
        match &self.store {
            Store::Packed(c, keys, _) => c.unpack(keys[i]),
            Store::Plain(v, _) => v[i].clone(),
        }
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        match &self.store {
            Store::Packed(c, _, map) => map.get(&c.pack(m)).map(|&i| i as usize),
            Store::Plain(_, map) => map.get(m).map(|&i| i as usize),
        }
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.index_of(m).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = Matrix> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// Generator indices spelling element i as a word from the identity.
    pub fn word(&self, mut i: usize) -> Vec<u16> {
        let mut w = Vec::new();
        while i != 0 {
            let (j, s) = self.parent[i];
            w.push(s);
            i = j as usize;
        }
        w.reverse();
        w
    }

    fn insert(&mut self, m: &Matrix, parent: (u32, u16), depth: u16) -> Option<usize> {
        let idx = self.parent.len() as u32;
        let fresh = match &mut self.store {
            Store::Packed(c, keys, map) => {
                let k = c.pack(m);
                if map.contains_key(&k) {
                    false
                } else {
                    map.insert(k, idx);
                    keys.push(k);
                    true
                }
            }
            Store::Plain(v, map) => {
                if map.contains_key(m) {
                    false
                } else {
                    map.insert(m.clone(), idx);
                    v.push(m.clone());
                    true
                }
            }
        };
        if fresh {
            self.parent.push(parent);
            self.depth.push(depth);
            Some(idx as usize)
        } else {
            None
        }
    }
}

/// Closure of `gens` in `group`; errors with `TooLarge` once more than `bound` elements appear.
pub fn bfs_closure(group: &dyn GroupLike, gens: &[Matrix], bound: u128) -> Result<Closure> {
    let ring = group.ring();
    let id = group.identity();
    let store = match KeyCodec::new(group.dim(), ring) {
        Some(c) => Store::Packed(c, Vec::new(), FxHashMap::default()),
        None => Store::Plain(Vec::new(), FxHashMap::default()),
    };
    let mut cl = Closure { store, parent: Vec::new(), depth: Vec::new() };
    cl.insert(&id, (0, u16::MAX), 0);
    let mut head = 0;
    while head < cl.len() {
        let x = cl.get(head);
        let dep = cl.depth[head];
        for (s, g) in gens.iter().enumerate() {
            let y = group.mul(&x, g);
            if cl.insert(&y, (head as u32, s as u16), dep.saturating_add(1)).is_some() && cl.len() as u128 > bound {
                return Err(Error::TooLarge { size: cl.len() as u128, bound });
            }
        }
        head += 1;
    }
    Ok(cl)
}
