//! Built-in configurations, one per plot panel. Ids are scoped
//! by subcommand.

use crate::error::{config, Result};

/// Values a preset supplies when the matching flag is absent.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Preset {
    pub model: Option<&'static str>,
    pub prior: Option<&'static str>,
    pub combiners: Option<&'static str>,
    pub y: Option<&'static [f64]>,
    pub reps: Option<usize>,
    pub assertion: Option<&'static str>,
    pub sparse: bool,
}

const RUNNING_MODEL: &str = "normal:10";
const RUNNING_PRIOR: &str = "interval:1,2,0.1";

fn running(combiners: &'static str, y: &'static [f64]) -> Preset {
    Preset {
        model: Some(RUNNING_MODEL),
        prior: Some(RUNNING_PRIOR),
        combiners: Some(combiners),
        y: Some(y),
        ..Preset::default()
    }
}

fn sparse() -> Preset {
    Preset {
        model: Some("mvnormal:2"),
        prior: Some("sparsity:2,0.5"),
        y: Some(&[1.0, 0.3]),
        sparse: true,
        ..Preset::default()
    }
}

pub fn preset(command: &str, id: &str) -> Result<Preset> {
    const AGGREGATION: &str = "vacuous,hose:0.5";
    const RULES: &str = "vacuous,dempster,tnorm:product";
    const FOUR: &str = "vacuous,hose:0.5,dempster,tnorm:product";
    let p = match (command, id) {
        ("contour", "1a") => running(AGGREGATION, &[1.5]),
        ("contour", "1b") => running(AGGREGATION, &[1.1]),
        ("contour", "1c") => running(AGGREGATION, &[0.9]),
        ("contour", "1d") => running(AGGREGATION, &[0.5]),
        ("contour", "3a") => running(RULES, &[1.5]),
        ("contour", "3b") => running(RULES, &[1.1]),
        ("contour", "3c") => running(RULES, &[0.9]),
        ("contour", "3d") => running(RULES, &[0.5]),
        ("contour", "6") | ("sparse-demo", "6") => sparse(),
        ("cond-validity", "2a" | "2b") => Preset {
            model: Some(RUNNING_MODEL),
            prior: Some("credal:0,1"),
            reps: Some(100_000),
            assertion: Some(if id == "2a" { "1,5" } else { "1,1.5" }),
            ..Preset::default()
        },
        ("validity-cdf", "3" | "4") => Preset {
            reps: Some(100_000),
            ..running(FOUR, &[])
        },
        ("coverage", "coverage") => Preset {
            reps: Some(10_000),
            ..running("vacuous,tnorm:product", &[])
        },
        ("validify", "5a") => running("tnorm:product", &[0.9]),
        ("validify", "5b") => running("tnorm:product", &[1.1]),
        _ => return Err(config(format!("no figure `{id}` for the {command} subcommand"))),
    };
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_scoped_by_command() {
        assert_eq!(preset("contour", "1a").unwrap().y, Some(&[1.5][..]));
        assert_eq!(preset("validify", "5b").unwrap().y, Some(&[1.1][..]));
        assert!(preset("contour", "2a").is_err());
        assert!(preset("cond-validity", "2b").unwrap().assertion == Some("1,1.5"));
        assert!(preset("sparse-demo", "6").unwrap().sparse);
    }
}
