//! Immersions written as coordinate expressions in `u` and `v`.

use super::{Immersion, Jet, ParamDomain};
use crate::error::{GeometryError, Result};
use crate::expr::Expr;
use crate::warped_space::WarpedSpace;

impl Immersion {
    /// Builds `(u, v) -> (t, x, y)` from a tuple such as `"(u, u*u, v)"`.
    /// Extra named constants (for instance `t0`) may appear in the
    /// expressions. Derivatives are symbolic.
    pub fn from_expression(
        space: WarpedSpace,
        domain: ParamDomain,
        src: &str,
        constants: &[(&str, f64)],
    ) -> Result<Self> {
        let items = Expr::parse_tuple(src)?;
        if items.len() != 3 {
            return Err(GeometryError::Parse(format!(
                "immersion needs three components (t, x, y), got {}",
                items.len()
            )));
        }
        let comps: [Expr; 3] = [items[0].clone(), items[1].clone(), items[2].clone()];
        let d = |var: &str| comps.clone().map(|e| e.derivative(var));
        let (du, dv) = (d("u"), d("v"));
        let duu = du.clone().map(|e| e.derivative("u"));
        let duv = du.clone().map(|e| e.derivative("v"));
        let dvv = dv.clone().map(|e| e.derivative("v"));
        let constants: Vec<(String, f64)> = constants.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let eval_all = move |es: &[Expr; 3], u: f64, v: f64| -> Result<[f64; 3]> {
            let mut env: Vec<(&str, f64)> = vec![("u", u), ("v", v)];
            env.extend(constants.iter().map(|(k, x)| (k.as_str(), *x)));
            Ok([es[0].eval(&env)?, es[1].eval(&env)?, es[2].eval(&env)?])
        };
        let eval_map = eval_all.clone();
        let map_comps = comps.clone();
        let jet = move |u: f64, v: f64| -> Result<Jet> {
            Ok(Jet {
                point: eval_all(&comps, u, v)?,
                du: eval_all(&du, u, v)?,
                dv: eval_all(&dv, u, v)?,
                duu: eval_all(&duu, u, v)?,
                duv: eval_all(&duv, u, v)?,
                dvv: eval_all(&dvv, u, v)?,
            })
        };
        Ok(Immersion::new(space, domain, move |u, v| eval_map(&map_comps, u, v))
            .with_jet(jet)
            .with_label("expression"))
    }
}
