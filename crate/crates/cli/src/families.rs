use loopforge::extension::{self, Params27};
use loopforge::{fixtures, iso, LoopTable, Perm};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn nums(s: &str, count: usize, what: &str) -> Result<Vec<u8>, String> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<u8>().map_err(|_| format!("{what}: '{t}' is not a small integer")))
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != count {
        return Err(format!("{what} takes {count} parameters, got {}", v.len()));
    }
    Ok(v)
}

/// Builds a fixture from a spec such as `cyclic:6`, `q16:1,1`,
/// `fam27:1,0,1,0,1` or `product:cyclic:2,dihedral8`.
pub fn build(spec: &str) -> Result<LoopTable, String> {
    let spec = spec.trim();
    let (head, args) = spec.split_once(':').unwrap_or((spec, ""));
    match head {
        "cyclic" => {
            let n: usize = args.parse().map_err(|_| format!("cyclic: bad order '{args}'"))?;
            if n == 0 || n > loopforge::table::MAX_ORDER {
                return Err(format!("cyclic: order {n} outside 1..=255"));
            }
            Ok(fixtures::cyclic(n))
        }
        "elem2" => {
            let k: u32 = args.parse().map_err(|_| format!("elem2: bad rank '{args}'"))?;
            if k > 7 {
                return Err(format!("elem2: rank {k} too large"));
            }
            Ok(fixtures::elem2(k))
        }
        "dihedral8" => Ok(fixtures::dihedral8()),
        "quaternion8" => Ok(fixtures::quaternion8()),
        "symmetric3" => Ok(fixtures::symmetric3()),
        "table1" => Ok(fixtures::table1()),
        "table2" => Ok(fixtures::table2()),
        "poly2_4" => Ok(fixtures::poly2_4()),
        "q16" | "poly16" => {
            let v = nums(args, 2, head)?;
            if v.iter().any(|&x| x > 3) {
                return Err(format!("{head}: r, s must lie in 0..4"));
            }
            Ok(if head == "q16" {
                fixtures::family16(v[0], v[1])
            } else {
                fixtures::poly16(v[0], v[1])
            })
        }
        "fam27" => {
            let v = nums(args, 5, head)?;
            let p = Params27::new(v[0], v[1], v[2], v[3], v[4]).map_err(|e| e.to_string())?;
            Ok(extension::family27(p))
        }
        "product" => {
            for (i, _) in args.match_indices(',') {
                if let (Ok(a), Ok(b)) = (build(&args[..i]), build(&args[i + 1..])) {
                    if a.order() * b.order() > loopforge::table::MAX_ORDER {
                        return Err("product: order exceeds 255".into());
                    }
                    return Ok(fixtures::product(&a, &b));
                }
            }
            Err(format!("product: cannot split '{args}' into two families"))
        }
        other => Err(format!("unknown family '{other}'")),
    }
}

/// Random relabeling fixing the identity, reproducible from `seed`.
pub fn shuffle(q: &LoopTable, seed: u64) -> LoopTable {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut rest: Vec<usize> = (1..q.order()).collect();
    rest.shuffle(&mut rng);
    let mut images = vec![0];
    images.extend(rest);
    iso::relabel(q, &Perm::from_images(images).expect("valid permutation"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs() {
        assert_eq!(build("cyclic:6").unwrap().order(), 6);
        assert_eq!(build("product:cyclic:2,q16:1,1").unwrap().order(), 32);
        assert_eq!(build("fam27:1,0,1,0,1").unwrap().order(), 27);
        assert!(build("q16:4,0").is_err());
        assert!(build("nope").is_err());
    }

    #[test]
    fn shuffle_is_seeded_and_isomorphic() {
        let q = fixtures::table1();
        let a = shuffle(&q, 7);
        assert_eq!(a, shuffle(&q, 7));
        assert!(iso::are_isomorphic(&q, &a).is_some());
    }
}
