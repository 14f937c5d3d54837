//! Report plumbing shared by the `fwsa` binary and its tests: the resolved
//! run configuration embedded in every JSON report and the payload/envelope
//! split that keeps payloads byte-identical across identical invocations.

pub mod report;
