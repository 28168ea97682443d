//! The set-spec mini-language.
//!
//! ```text
//! spec     := "full"
//!           | "random:" N ":seed=" N
//!           | "sphere:" N
//!           | "line:" vec ":" vec              origin, direction
//!           | "subspace:" vec (":" vec)*       spanning vectors
//!           | "union:" "(" spec ")" ("," "(" spec ")")*
//!           | "product:" "(" spec ")@" N ("," "(" spec ")@" N)*
//!           | "file:" path                     path runs to the end or to ')'
//! vec      := N ("," N)*
//! ```
//! In a product each child is generated in its own dimension; the dimensions
//! must sum to the ambient one, and the first child owns the leading
//! coordinates.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetSpec {
    Full,
    Random { size: u64, seed: u64 },
    Sphere { t: u64 },
    Line { origin: Vec<u64>, direction: Vec<u64> },
    Subspace { basis: Vec<Vec<u64>> },
    Union(Vec<SetSpec>),
    Product(Vec<(SetSpec, usize)>),
    File(PathBuf),
}

fn write_vec(f: &mut fmt::Formatter<'_>, v: &[u64]) -> fmt::Result {
    for (i, c) in v.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::Full => f.write_str("full"),
            SetSpec::Random { size, seed } => write!(f, "random:{size}:seed={seed}"),
            SetSpec::Sphere { t } => write!(f, "sphere:{t}"),
            SetSpec::Line { origin, direction } => {
                f.write_str("line:")?;
                write_vec(f, origin)?;
                f.write_str(":")?;
                write_vec(f, direction)
            }
            SetSpec::Subspace { basis } => {
                f.write_str("subspace")?;
                for v in basis {
                    f.write_str(":")?;
                    write_vec(f, v)?;
                }
                Ok(())
            }
            SetSpec::Union(children) => {
                f.write_str("union:")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "({c})")?;
                }
                Ok(())
            }
            SetSpec::Product(children) => {
                f.write_str("product:")?;
                for (i, (c, d)) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "({c})@{d}")?;
                }
                Ok(())
            }
            SetSpec::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

impl SetSpec {
    pub fn render(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<SetSpec> {
        let mut p = Parser { src: text, pos: 0 };
        let spec = p.spec()?;
        if p.pos != text.len() {
            return Err(Error::spec_parse(p.pos, "unexpected trailing input"));
        }
        Ok(spec)
    }
}

impl FromStr for SetSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SetSpec::parse(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(Error::spec_parse(self.pos, format!("expected `{token}`")))
        }
    }

    fn word(&mut self) -> &str {
        let start = self.pos;
        let len = self.rest().bytes().take_while(|b| b.is_ascii_alphabetic()).count();
        self.pos += len;
        &self.src[start..self.pos]
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        let len = self.rest().bytes().take_while(|b| b.is_ascii_digit()).count();
        if len == 0 {
            return Err(Error::spec_parse(start, "expected a number"));
        }
        self.pos += len;
        self.src[start..self.pos]
            .parse()
            .map_err(|_| Error::spec_parse(start, "number does not fit in 64 bits"))
    }

    fn vector(&mut self) -> Result<Vec<u64>> {
        let mut out = vec![self.number()?];
        while self.eat(",") {
            out.push(self.number()?);
        }
        Ok(out)
    }

    fn child(&mut self) -> Result<SetSpec> {
        self.expect("(")?;
        let spec = self.spec()?;
        self.expect(")")?;
        Ok(spec)
    }

    fn spec(&mut self) -> Result<SetSpec> {
        let start = self.pos;
        let kind = self.word().to_owned();
        match kind.as_str() {
            "full" => Ok(SetSpec::Full),
            "random" => {
                self.expect(":")?;
                let size = self.number()?;
                if !self.eat(":seed=") {
                    return Err(Error::spec_parse(self.pos, "random sets need an explicit `:seed=<n>`"));
                }
                let seed = self.number()?;
                Ok(SetSpec::Random { size, seed })
            }
            "sphere" => {
                self.expect(":")?;
                Ok(SetSpec::Sphere { t: self.number()? })
            }
            "line" => {
                self.expect(":")?;
                let origin = self.vector()?;
                self.expect(":")?;
                let direction = self.vector()?;
                Ok(SetSpec::Line { origin, direction })
            }
            "subspace" => {
                let mut basis = Vec::new();
                while self.eat(":") {
                    basis.push(self.vector()?);
                }
                if basis.is_empty() {
                    return Err(Error::spec_parse(self.pos, "subspace needs at least one vector"));
                }
                Ok(SetSpec::Subspace { basis })
            }
            "union" => {
                self.expect(":")?;
                let mut children = vec![self.child()?];
                while self.eat(",") {
                    children.push(self.child()?);
                }
                Ok(SetSpec::Union(children))
            }
            "product" => {
                self.expect(":")?;
                let mut children = Vec::new();
                loop {
                    let child = self.child()?;
                    self.expect("@")?;
                    let at = self.pos;
                    let dim = self.number()?;
                    if dim == 0 {
                        return Err(Error::spec_parse(at, "product factor dimension must be positive"));
                    }
                    children.push((child, dim as usize));
                    if !self.eat(",") {
                        break;
                    }
                }
                Ok(SetSpec::Product(children))
            }
            "file" => {
                self.expect(":")?;
                let len = self.rest().find(')').unwrap_or(self.rest().len());
                if len == 0 {
                    return Err(Error::spec_parse(self.pos, "empty file path"));
                }
                let path = PathBuf::from(&self.rest()[..len]);
                self.pos += len;
                Ok(SetSpec::File(path))
            }
            "" => Err(Error::spec_parse(start, "expected a set kind")),
            other => Err(Error::spec_parse(start, format!("unknown set kind `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn parse_examples() {
        assert_eq!(SetSpec::parse("sphere:1").unwrap(), SetSpec::Sphere { t: 1 });
        assert_eq!(
            SetSpec::parse("union:(line:0,0:1,0),(sphere:2)").unwrap(),
            SetSpec::Union(vec![
                SetSpec::Line { origin: vec![0, 0], direction: vec![1, 0] },
                SetSpec::Sphere { t: 2 },
            ])
        );
        assert_eq!(
            SetSpec::parse("product:(sphere:1)@2,(full)@1").unwrap(),
            SetSpec::Product(vec![(SetSpec::Sphere { t: 1 }, 2), (SetSpec::Full, 1)])
        );
        assert_eq!(
            SetSpec::parse("union:(file:/tmp/a b.txt),(full)").unwrap(),
            SetSpec::Union(vec![SetSpec::File("/tmp/a b.txt".into()), SetSpec::Full])
        );
    }

    #[test]
    fn parse_errors_carry_position() {
        match SetSpec::parse("random:10") {
            Err(Error::SpecParse { position: 9, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(SetSpec::parse("blob"), Err(Error::SpecParse { position: 0, .. })));
        assert!(matches!(SetSpec::parse("full:"), Err(Error::SpecParse { position: 4, .. })));
        assert!(matches!(SetSpec::parse("union:(full"), Err(Error::SpecParse { position: 11, .. })));
        assert!(SetSpec::parse("product:(full)@0").is_err());
        assert!(SetSpec::parse("subspace").is_err());
    }

    fn arb_vec() -> impl Strategy<Value = Vec<u64>> {
        prop::collection::vec(0u64..50, 1..4)
    }

    fn arb_spec() -> impl Strategy<Value = SetSpec> {
        let leaf = prop_oneof![
            Just(SetSpec::Full),
            (any::<u64>(), any::<u64>()).prop_map(|(size, seed)| SetSpec::Random { size, seed }),
            (0u64..100).prop_map(|t| SetSpec::Sphere { t }),
            (arb_vec(), arb_vec()).prop_map(|(origin, direction)| SetSpec::Line { origin, direction }),
            prop::collection::vec(arb_vec(), 1..3).prop_map(|basis| SetSpec::Subspace { basis }),
            "[a-z/._-]{1,12}".prop_map(|p| SetSpec::File(p.into())),
        ];
        leaf.prop_recursive(3, 16, 3, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 1..4).prop_map(SetSpec::Union),
                prop::collection::vec((inner, 1usize..4), 1..3).prop_map(SetSpec::Product),
            ]
        })
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(spec in arb_spec()) {
            prop_assert_eq!(SetSpec::parse(&spec.render()).unwrap(), spec);
        }
    }
}
