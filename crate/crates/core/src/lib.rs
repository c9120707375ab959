//! Numerical toolkit for q-difference equations of hypergeometric type.
//!
//! The crate covers q-Pochhammer products and Jackson integrals ([`qcore`]),
//! basic hypergeometric series ([`qseries`]), the noncommutative algebra of
//! q-difference operators ([`opalgebra`]), constructors for the named
//! equations ([`equations`]) and their closed-form solutions together with
//! residual checks and symmetry groups ([`solutions`]).

pub mod equations;
pub mod error;
pub mod opalgebra;
pub mod qcore;
pub mod qseries;
pub mod sampling;
pub mod solutions;

pub use error::{QError, Result};
pub use num_complex::Complex64 as C64;
pub use qcore::QContext;

/// Serde adapter writing a complex number as `[re, im]`.
pub mod cser {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::C64;

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }

    /// The same encoding for fixed-size arrays and vectors of complex numbers.
    pub mod seq {
        use serde::de::Error;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        use crate::C64;

        pub fn serialize<S: Serializer, T: AsRef<[C64]>>(v: &T, s: S) -> Result<S::Ok, S::Error> {
            let pairs: Vec<[f64; 2]> = v.as_ref().iter().map(|z| [z.re, z.im]).collect();
            pairs.serialize(s)
        }

        pub fn deserialize<'de, D, T>(d: D) -> Result<T, D::Error>
        where
            D: Deserializer<'de>,
            T: TryFrom<Vec<C64>>,
        {
            let pairs = Vec::<[f64; 2]>::deserialize(d)?;
            let n = pairs.len();
            let v: Vec<C64> = pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect();
            T::try_from(v).map_err(|_| D::Error::custom(format!("unexpected length {n}")))
        }
    }

    /// The same encoding for an optional complex number (`null` when absent).
    pub mod opt {
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        use crate::C64;

        pub fn serialize<S: Serializer>(z: &Option<C64>, s: S) -> Result<S::Ok, S::Error> {
            z.map(|z| [z.re, z.im]).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<C64>, D::Error> {
            Ok(Option::<[f64; 2]>::deserialize(d)?.map(|[re, im]| C64::new(re, im)))
        }
    }
}
