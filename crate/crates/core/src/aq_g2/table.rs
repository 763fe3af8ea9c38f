use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::tensor::{block_basis, Dense, State, WeightVector};

/// One weight block of the intertwiner, `matrix[out][in]` over `basis`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntertwinerBlock {
    #[serde(rename = "P")]
    pub p: i32,
    #[serde(rename = "Q")]
    pub q: i32,
    pub basis: Vec<State>,
    pub matrix: Dense,
}

impl IntertwinerBlock {
    pub fn weight(&self) -> WeightVector {
        WeightVector::new(self.p, self.q)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, s: &State) -> Option<usize> {
        self.basis.binary_search(s).ok()
    }
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    blocks: Vec<IntertwinerBlock>,
}

/// Intertwiner blocks for all weights with `P <= pmax`, `Q <= qmax`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntertwinerTable {
    pub pmax: i32,
    pub qmax: i32,
    pub blocks: BTreeMap<WeightVector, IntertwinerBlock>,
}

impl IntertwinerTable {
    pub fn block(&self, w: WeightVector) -> Option<&IntertwinerBlock> {
        self.blocks.get(&w)
    }

    /// `F^{out}_{in}`; zero when the weights differ, `None` outside the table.
    pub fn entry(&self, out: &State, inp: &State) -> Option<Scalar> {
        let w = WeightVector::of_state(inp);
        let b = self.blocks.get(&w)?;
        let c = b.index_of(inp)?;
        if WeightVector::of_state(out) != w {
            return Some(Scalar::zero());
        }
        let r = b.index_of(out)?;
        Some(b.matrix[r][c].clone())
    }

    pub fn total_entries(&self) -> usize {
        self.blocks.values().map(|b| b.dim() * b.dim()).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let t = TableJson { blocks: self.blocks.values().cloned().collect() };
        serde_json::to_value(t).expect("table serialises")
    }

    /// Parses the JSON form and checks every basis against the block enumeration.
    pub fn from_json(v: &serde_json::Value) -> Result<IntertwinerTable, String> {
        let t: TableJson = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
        let mut blocks = BTreeMap::new();
        let (mut pmax, mut qmax) = (0, 0);
        for b in t.blocks {
            let w = b.weight();
            if b.basis != block_basis(w) {
                return Err(format!("block {w}: basis does not match the block enumeration"));
            }
            let d = b.dim();
            if b.matrix.len() != d || b.matrix.iter().any(|r| r.len() != d) {
                return Err(format!("block {w}: matrix is not {d}x{d}"));
            }
            pmax = pmax.max(w.p);
            qmax = qmax.max(w.q);
            blocks.insert(w, b);
        }
        Ok(IntertwinerTable { pmax, qmax, blocks })
    }
}
