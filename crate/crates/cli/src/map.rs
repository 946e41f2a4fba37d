//! The `map` subcommand: one JSON object in, one out.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::json;

use ballotmat::fixedpoint::{self, FixedPointMatrix};
use ballotmat::{poset_of, BallotMatrix, ConstructionChoice};

use crate::Failure;

#[derive(Clone, Copy, ValueEnum)]
pub enum MapKind {
    MatrixToPoset,
    CcToPerm,
    CcToInvtab,
    CcToBallot,
    Decompose,
    Rho,
    RhoInverse,
    Eta,
}

pub fn apply(kind: MapKind, missing: bool, input: &str) -> Result<String, Failure> {
    match kind {
        MapKind::MatrixToPoset => to_json(&poset_of(&matrix(input)?)),
        MapKind::CcToPerm => to_json(&json!({ "perm": choice(input)?.to_permutation() })),
        MapKind::CcToInvtab => {
            let c = choice(input)?;
            let table = if missing {
                c.to_inversion_table_missing()
            } else {
                c.to_inversion_table_subset()
            };
            to_json(&json!({ "invtab": table }))
        }
        MapKind::CcToBallot => to_json(&json!({ "ballot": choice(input)?.to_ballot() })),
        MapKind::Decompose => {
            let f = FixedPointMatrix::new(matrix(input)?)?;
            to_json(&f.decompose())
        }
        MapKind::Rho => to_json(&fixedpoint::rho(&matrix(input)?)?),
        MapKind::RhoInverse => to_json(&fixedpoint::rho_inverse(&matrix(input)?)?),
        MapKind::Eta => to_json(&matrix(input)?.eta()),
    }
}

fn to_json(value: &impl Serialize) -> Result<String, Failure> {
    Ok(serde_json::to_string(value)?)
}

fn matrix(input: &str) -> Result<BallotMatrix, Failure> {
    Ok(serde_json::from_str(input)?)
}

fn choice(input: &str) -> Result<ConstructionChoice, Failure> {
    Ok(serde_json::from_str(input)?)
}
