//! Library side of the `mpelab` command-line tool: the verification suite
//! lives here so both the binary and the acceptance tests can run it.

pub mod verify;
