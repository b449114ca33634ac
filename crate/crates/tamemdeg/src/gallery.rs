//! Named maps, stored as text and parsed on demand.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::polymap::PolyMap;

const XYZ: [&str; 3] = ["x", "y", "z"];

struct Entry {
    name: &'static str,
    about: &'static str,
    components: [&'static str; 3],
}

const ENTRIES: &[Entry] = &[
    Entry {
        name: "nagata",
        about: "Nagata's wild automorphism, multidegree (5,3,1)",
        components: [
            "x + 2*y*(y^2 + z*x) - z*(y^2 + z*x)^2",
            "y - z*(y^2 + z*x)",
            "z",
        ],
    },
    Entry {
        name: "swap13",
        about: "transposition of the first and third coordinates",
        components: ["z", "y", "x"],
    },
    Entry {
        name: "su_t1",
        about: "first factor of the (9,6,8) example",
        components: ["x", "y + x^2", "z + 2*x*y + x^3"],
    },
    Entry {
        name: "su_t2",
        about: "second factor of the (9,6,8) example",
        components: ["6*x + 6*y*z + z^3", "4*y + z^2", "z"],
    },
    Entry {
        name: "su_t3",
        about: "third factor of the (9,6,8) example",
        components: ["x", "y", "z + x^2 - y^3"],
    },
    Entry {
        name: "su_l",
        about: "affine factor of the (9,6,8) example",
        components: ["x + z", "y", "z"],
    },
];

/// Names accepted by [`gallery`].
pub fn gallery_names() -> Vec<&'static str> {
    let mut names: Vec<&str> = ENTRIES.iter().map(|e| e.name).collect();
    names.extend(["su_t2t1", "su_t3t2t1", "su_example"]);
    names
}

pub fn gallery_description(name: &str) -> Option<&'static str> {
    match name {
        "su_t2t1" => Some("su_t2 ∘ su_t1, multidegree (9,6,3)"),
        "su_t3t2t1" => Some("su_t3 ∘ su_t2 ∘ su_t1, multidegree (9,6,8)"),
        "su_example" => Some("su_l ∘ su_t3 ∘ su_t2 ∘ su_t1, a tame map of multidegree (9,6,8) without elementary reductions"),
        _ => ENTRIES.iter().find(|e| e.name == name).map(|e| e.about),
    }
}

/// Factors of a composite gallery map, in application order.
pub fn gallery_factors(name: &str) -> Result<Vec<PolyMap>> {
    let names: &[&str] = match name {
        "su_t2t1" => &["su_t1", "su_t2"],
        "su_t3t2t1" => &["su_t1", "su_t2", "su_t3"],
        "su_example" => &["su_t1", "su_t2", "su_t3", "su_l"],
        _ => return Ok(vec![gallery(name)?]),
    };
    names.iter().map(|n| gallery(n)).collect()
}

pub fn gallery(name: &str) -> Result<PolyMap> {
    if let Some(e) = ENTRIES.iter().find(|e| e.name == name) {
        return PolyMap::parse(&e.components, &XYZ);
    }
    match name {
        "su_t2t1" | "su_t3t2t1" | "su_example" => {
            let factors = gallery_factors(name)?;
            PolyMap::compose_chain(3, &factors)
        }
        _ => Err(Error::UnknownGallery(name.to_string())),
    }
}

/// `(T∘N)^n` with `T` = swap13 and `N` = nagata, for `n ≥ 1`.
pub fn nagata_power(n: u32) -> Result<PolyMap> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "nagata_power is defined for n >= 1".into(),
        ));
    }
    let tn = gallery("swap13")?.compose(&gallery("nagata")?)?;
    let mut acc = tn.clone();
    for _ in 1..n {
        acc = tn.compose(&acc)?;
    }
    Ok(acc)
}

/// `y^2 + z*x`, the quadratic form preserved by the Nagata family.
pub fn nagata_invariant() -> Polynomial {
    Polynomial::parse("y^2 + z*x", &XYZ).expect("static text")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polymap::Multidegree;

    #[test]
    fn nagata_multidegree() {
        assert_eq!(
            gallery("nagata").unwrap().mdeg(),
            Multidegree::from([5, 3, 1])
        );
    }

    #[test]
    fn swap() {
        let s = gallery("swap13").unwrap();
        assert_eq!(s.to_string(), "(z, y, x)");
    }

    #[test]
    fn su_example_chain() {
        assert_eq!(
            gallery("su_t2t1").unwrap().mdeg(),
            Multidegree::from([9, 6, 3])
        );
        assert_eq!(
            gallery("su_t3t2t1").unwrap().mdeg(),
            Multidegree::from([9, 6, 8])
        );
        assert_eq!(
            gallery("su_example").unwrap().mdeg(),
            Multidegree::from([9, 6, 8])
        );
    }

    #[test]
    fn unknown_name() {
        assert_eq!(
            gallery("nope"),
            Err(Error::UnknownGallery("nope".to_string()))
        );
    }

    #[test]
    fn nagata_family() {
        assert_eq!(
            nagata_power(1).unwrap().mdeg(),
            Multidegree::from([1, 3, 5])
        );
        assert_eq!(
            nagata_power(2).unwrap().mdeg(),
            Multidegree::from([5, 7, 9])
        );
        assert!(nagata_power(0).is_err());
    }

    #[test]
    fn every_name_resolves() {
        for name in gallery_names() {
            assert!(gallery(name).is_ok(), "{name}");
            assert!(gallery_description(name).is_some(), "{name}");
        }
    }
}
