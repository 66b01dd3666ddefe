//! Shared workloads for the benchmarks.

use subjparse::corpus::parse_corpus;
use subjparse::pipeline::{build_cases, PreparedCorpus};
use subjparse::resources::SYNTHETIC_CORPUS;
use subjparse::{AnnotatedCorpus, Resources, TupleMode};

pub struct Workload {
    pub res: Resources,
    pub corpus: AnnotatedCorpus,
}

impl Workload {
    pub fn bundled() -> Self {
        let res = Resources::defaults().expect("bundled resources");
        let corpus = parse_corpus(SYNTHETIC_CORPUS, &res.tagset).expect("bundled corpus");
        Workload { res, corpus }
    }

    pub fn prepared(&self, mode: TupleMode) -> PreparedCorpus {
        build_cases(&self.corpus, &self.res, &self.res.index(mode)).expect("encoding")
    }
}
