use anyhow::{bail, Context, Result};
use egb_core::freegroup::{alpha_tilde, conjugate_eq, eggbeater_itinerary, itinerary_to_word, self_intersection, Segment, Word};

use crate::config::u64_list;
use crate::schema::read_json;
use crate::{FreeGroupCmd, Output};

fn word(s: &str) -> Result<Word> {
    s.parse::<Word>().map_err(|e| anyhow::anyhow!("{s:?}: {e}"))
}

pub fn run(cmd: FreeGroupCmd) -> Result<Output> {
    let text = match cmd {
        FreeGroupCmd::Reduce { word: w } => word(&w)?.reduce().to_string(),
        FreeGroupCmd::Conjugate { a, b } => conjugate_eq(&word(&a)?, &word(&b)?).to_string(),
        FreeGroupCmd::Itinerary { m, n, file } => match (file, m, n) {
            (Some(path), None, None) => {
                let segs: Vec<Segment> = read_json(&path)?;
                itinerary_to_word(&segs)?.to_string()
            }
            (None, Some(m), Some(n)) => {
                let (m, n) = (u64_list(&m).context("--m")?, u64_list(&n).context("--n")?);
                if m.len() != n.len() || m.is_empty() {
                    bail!("--m and --n need the same positive length");
                }
                let w = itinerary_to_word(&eggbeater_itinerary(&m, &n))?;
                if w != alpha_tilde(&m, &n) {
                    bail!("canonical itinerary gave {w}");
                }
                w.to_string()
            }
            _ => bail!("give either --file or both --m and --n"),
        },
        FreeGroupCmd::Si { m, n } => self_intersection(m, n)?.to_string(),
    };
    Ok(Output::ok(text + "\n"))
}
