#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}
#[doc = include_str!("../../../book/src/registers.md")]
mod registers {}
#[doc = include_str!("../../../book/src/graphs.md")]
mod graphs {}
#[doc = include_str!("../../../book/src/simulator.md")]
mod simulator {}
#[doc = include_str!("../../../book/src/zero_knowledge.md")]
mod zero_knowledge {}
#[doc = include_str!("../../../book/src/amplification.md")]
mod amplification {}
#[doc = include_str!("../../../book/src/cli.md")]
mod cli {}
