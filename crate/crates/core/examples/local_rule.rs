//! The two actions of the local rule on a single vertex with three neighbors.
//!
//! Words are a < b < c < d (ids 0..3). The center first hears b, c, d while
//! knowing {a, b}: it adds c and d. Then, knowing {a, b, c} and hearing
//! b, c, a, it collapses onto a.

use naming_automata::dynamics::{
    apply_local_rule, split_conveyed, AgentState, Configuration, Word,
};
use naming_automata::Graph;

fn name(w: Word) -> char {
    (b'a' + w.0 as u8) as char
}

fn show(s: &AgentState) -> String {
    let memory: String = s.memory().iter().map(|&w| name(w)).collect();
    format!("({{{memory}}}, {})", name(s.conveyed()))
}

fn demo(title: &str, center: AgentState, heard: [u32; 3]) -> naming_automata::Result<()> {
    let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)])?;
    let mut states = vec![center];
    states.extend(heard.iter().map(|&w| AgentState::singleton(Word(w))));
    let cfg = Configuration::from_states(states, 4)?;

    let (known, unknown) = split_conveyed(&cfg, &star, 0)?;
    let next = apply_local_rule(&cfg, &star, 0);
    println!("{title}");
    println!(
        "  known B = {:?}, unknown N = {:?}",
        known.iter().map(|&w| name(w)).collect::<Vec<_>>(),
        unknown.iter().map(|&w| name(w)).collect::<Vec<_>>()
    );
    println!("  {} -> {}", show(cfg.state(0)), show(&next));
    Ok(())
}

fn main() -> naming_automata::Result<()> {
    demo(
        "addition",
        AgentState::new([Word(0), Word(1)], Word(1))?,
        [1, 2, 3],
    )?;
    demo(
        "collapse",
        AgentState::new([Word(0), Word(1), Word(2)], Word(1))?,
        [1, 2, 0],
    )?;
    Ok(())
}
