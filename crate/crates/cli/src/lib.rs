//! Library half of the `singlocus` command line tool: subcommand
//! implementations and the text renderer.

pub mod commands;
pub mod render;
