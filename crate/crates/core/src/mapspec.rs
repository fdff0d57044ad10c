//! JSON descriptions of circle maps.
//!
//! ```json
//! {"type": "moebius", "a": [1.1276259652063807, 0.0], "b": [0.5210953054937474, 0.0]}
//! {"type": "flow", "coeffs": [[0, 0], [0, 0], [0.1, 0]], "t": 1.0}
//! {"type": "rotation", "theta": 0.5}
//! {"type": "identity"}
//! {"type": "lift", "displacement": [0.0, 0.01, …]}
//! {"type": "compose", "maps": [first, second, …]}
//! ```
//!
//! Flow coefficients are `v_0, v_1, …` of `v(x) = Σ v_n e^{inx}` with
//! `v_{−n} = conj(v_n)`. A lift lists displacements `η̃(x_j) − x_j` on the
//! uniform grid. Composite maps are applied in the order listed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle::{
    compose, default_steps, flow_map, CircleMap, MoebiusMap, SampledLift, VectorField,
};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    Identity,
    Rotation {
        theta: f64,
    },
    Moebius {
        a: [f64; 2],
        b: [f64; 2],
    },
    Flow {
        coeffs: Vec<[f64; 2]>,
        t: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        steps: Option<usize>,
    },
    Lift {
        displacement: Vec<f64>,
    },
    Compose {
        maps: Vec<MapSpec>,
    },
}

fn complex([re, im]: [f64; 2]) -> Complex64 {
    Complex64::new(re, im)
}

impl MapSpec {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("map specs always serialize")
    }

    pub fn build(&self) -> Result<CircleMap> {
        Ok(match self {
            Self::Identity => CircleMap::identity(),
            Self::Rotation { theta } => CircleMap::rotation(*theta),
            Self::Moebius { a, b } => {
                CircleMap::Moebius(MoebiusMap::new(complex(*a), complex(*b))?)
            }
            Self::Flow { coeffs, t, steps } => {
                let field = VectorField::new(coeffs.iter().copied().map(complex).collect())?;
                flow_map(&field, *t, steps.unwrap_or_else(|| default_steps(*t)))?
            }
            Self::Lift { displacement } => {
                CircleMap::Lift(SampledLift::from_displacements(displacement.clone())?)
            }
            Self::Compose { maps } => {
                let mut acc = CircleMap::identity();
                for spec in maps {
                    acc = compose(&spec.build()?, &acc);
                }
                acc
            }
        })
    }
}
