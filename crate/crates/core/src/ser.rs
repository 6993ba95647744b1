use num_bigint::BigInt;
use serde::Serializer;

pub(crate) fn bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}
