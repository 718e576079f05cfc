//! Big integers are written as decimal strings.

use num_bigint::BigUint;
use serde::Serializer;

pub(crate) fn big<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}
