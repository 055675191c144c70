use crate::network::Network;

/// Disjoint-set forest over node ids `0..len`.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub(crate) fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len as u32).collect(),
        }
    }

    pub(crate) fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let up = self.parent[self.parent[x] as usize];
            self.parent[x] = up;
            x = up as usize;
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Keep the smaller id as root so canonical labels are stable.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo as u32;
        }
    }
}

/// Reusable source/sink connectivity test over arc bitmasks (bit `k` = arc `k+1`).
pub(crate) struct ArcProbe {
    ends: Vec<(usize, usize)>,
    uf: UnionFind,
    source: usize,
    sink: usize,
}

impl ArcProbe {
    pub(crate) fn new(network: &Network) -> Self {
        ArcProbe {
            ends: network.arcs().iter().map(|a| (a.u, a.v)).collect(),
            uf: UnionFind::new(network.node_count() + 1),
            source: network.source(),
            sink: network.sink(),
        }
    }

    pub(crate) fn connected(&mut self, mask: u64) -> bool {
        self.uf.reset();
        let mut rest = mask;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (u, v) = self.ends[k];
            self.uf.union(u, v);
        }
        self.uf.find(self.source) == self.uf.find(self.sink)
    }
}
