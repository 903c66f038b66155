//! Text formats for states and decomposition candidates.
//!
//! A state is `{"dims": [dA, dB], "matrix": [[re, im], ...]}` with the
//! density matrix in row-major order, or the same object with a `"vector"`
//! field holding the amplitudes of a pure state.

use serde::{Deserialize, Serialize};

use crate::criteria::StateInput;
use crate::decomposition::LiQiaoCandidate;
use crate::error::{Error, Result};
use crate::linalg::{BipartiteDims, CMat, C64};
use crate::states::{DensityMatrix, PureState};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    dims: [usize; 2],
    matrix: Option<Vec<[f64; 2]>>,
    vector: Option<Vec<[f64; 2]>>,
}

#[derive(Serialize)]
struct StateOut<'a> {
    dims: [usize; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<&'a [[f64; 2]]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vector: Option<&'a [[f64; 2]]>,
}

/// Byte offset of a serde_json error position within `text`.
fn byte_offset(text: &str, err: &serde_json::Error) -> usize {
    if err.line() == 0 {
        return 0;
    }
    let line_start: usize = text
        .split_inclusive('\n')
        .take(err.line() - 1)
        .map(str::len)
        .sum();
    (line_start + err.column().saturating_sub(1)).min(text.len())
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        offset: byte_offset(text, &e),
        message: e.to_string(),
    })
}

fn complex(pairs: &[[f64; 2]]) -> Vec<C64> {
    pairs.iter().map(|[re, im]| C64::new(*re, *im)).collect()
}

fn pairs(values: &[C64]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

/// Parses and validates a state file.
///
/// Syntax and shape problems come back as [`Error::Parse`]; a well-formed
/// file holding an invalid state yields the validation error.
pub fn parse_state(text: &str) -> Result<StateInput> {
    let raw: RawState = parse_json(text)?;
    let at_end = |message: String| Error::Parse {
        offset: text.trim_end().len(),
        message,
    };
    let dims = BipartiteDims::new(raw.dims[0], raw.dims[1])?;
    let n = dims.total();
    match (raw.matrix, raw.vector) {
        (Some(m), None) => {
            if m.len() != n * n {
                return Err(at_end(format!(
                    "\"matrix\" has {} entries, dims {dims} need {}",
                    m.len(),
                    n * n
                )));
            }
            let mat = CMat::from_row_major(n, n, complex(&m))?;
            Ok(StateInput::Mixed(DensityMatrix::new(mat, dims)?))
        }
        (None, Some(v)) => {
            if v.len() != n {
                return Err(at_end(format!(
                    "\"vector\" has {} entries, dims {dims} need {n}",
                    v.len()
                )));
            }
            Ok(StateInput::Pure(PureState::new(complex(&v), dims)?))
        }
        (Some(_), Some(_)) => Err(at_end(
            "expected exactly one of \"matrix\" and \"vector\"".into(),
        )),
        (None, None) => Err(at_end("missing field \"matrix\" or \"vector\"".into())),
    }
}

pub fn state_to_json(state: &StateInput) -> String {
    let dims = state.dims();
    let dims = [dims.da(), dims.db()];
    let (matrix, vector) = match state {
        StateInput::Mixed(rho) => (Some(pairs(rho.matrix().as_slice())), None),
        StateInput::Pure(psi) => (None, Some(pairs(psi.amplitudes()))),
    };
    let out = StateOut {
        dims,
        matrix: matrix.as_deref(),
        vector: vector.as_deref(),
    };
    let mut s = serde_json::to_string(&out).expect("plain data serialises");
    s.push('\n');
    s
}

pub fn parse_candidate(text: &str) -> Result<LiQiaoCandidate> {
    parse_json(text)
}

pub fn candidate_to_json(cand: &LiQiaoCandidate) -> String {
    let mut s = serde_json::to_string_pretty(cand).expect("plain data serialises");
    s.push('\n');
    s
}
