// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>

#include "geocov/ingest.hpp"
#include "geocov/resolve.hpp"

namespace geocov {

struct PipelineOptions {
  std::size_t workers = 0;       // 0: hardware concurrency
  bool preserve_order = true;    // reorder buffer; false writes in arrival order
  std::size_t chunk_size = 512;  // tweets per work item
};

struct PipelineResult {
  std::uint64_t records_written = 0;
  IngestStats ingest;
  ResolveCounters counters;
  GeocoderStats geocoder;
  double seconds = 0.0;
};

/// Reads the corpus, resolves every tweet on a bounded worker pool and
/// writes one GeoRecord line per tweet to `sink`.
PipelineResult run_resolve_pipeline(CorpusReader& reader, Resolver& resolver, std::ostream& sink,
                                    const PipelineOptions& options = {});

/// Failure-counter sidecar written next to the GeoRecord file.
nlohmann::ordered_json summary_json(const PipelineResult& result);

}  // namespace geocov
