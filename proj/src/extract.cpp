#include "trevisan/extract.hpp"

#include <algorithm>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "trevisan/error.hpp"

namespace trevisan {

namespace {

void validate(const ExtractionJob& job) {
  if (job.m > job.design.m()) {
    throw InvalidParameters("requested " + std::to_string(job.m) + " output bits from a design with " +
                            std::to_string(job.design.m()) + " sets");
  }
  if (job.seed.size() < job.design.d()) {
    throw InsufficientData("seed has " + std::to_string(job.seed.size()) + " bits, design needs d = " +
                           std::to_string(job.design.d()));
  }
  if (job.input.size() < job.extractor.input_bits()) {
    throw InsufficientData("input has " + std::to_string(job.input.size()) + " bits, extractor needs " +
                           std::to_string(job.extractor.input_bits()));
  }
  if (job.design.t() < job.extractor.num_random_bits()) {
    throw InvalidParameters("design sets of size " + std::to_string(job.design.t()) +
                            " are smaller than the extractor seed " +
                            std::to_string(job.extractor.num_random_bits()));
  }
  if (job.workers == 0) {
    throw InvalidParameters("need at least one worker");
  }
}

void run_range(const ExtractionJob& job, const BoundExtractor& bound, uint64_t begin, uint64_t end, BitBuffer& out) {
  const uint64_t t_req = job.extractor.num_random_bits();
  std::vector<uint64_t> indices(t_req);
  BitBuffer subseed(t_req);
  for (uint64_t i = begin; i < end; ++i) {
    job.design.compute_prefix(i, indices);
    for (uint64_t j = 0; j < t_req; ++j) {
      subseed.set(j, job.seed.get(indices[j]));
    }
    out.set(i, bound.extract(subseed));
  }
}

}  // namespace

void slice_subseed(const BitBuffer& seed, std::span<const uint64_t> indices, BitBuffer& out) {
  if (out.size() != indices.size()) {
    out = BitBuffer(indices.size());
  }
  for (size_t j = 0; j < indices.size(); ++j) {
    out.set(j, seed.at(indices[j]));
  }
}

BitBuffer slice_subseed(const BitBuffer& seed, std::span<const uint64_t> indices) {
  BitBuffer out(indices.size());
  slice_subseed(seed, indices, out);
  return out;
}

BitBuffer extract_all(const ExtractionJob& job) {
  validate(job);
  BitBuffer out(job.m);
  if (job.m == 0) {
    return out;
  }
  const auto bound = job.extractor.bind(job.input);

  // Shard boundaries are multiples of 8 so no two workers touch one byte.
  const uint64_t per_worker = (job.m + job.workers - 1) / job.workers;
  const uint64_t chunk = std::max<uint64_t>(8, (per_worker + 7) / 8 * 8);
  const uint64_t shards = (job.m + chunk - 1) / chunk;
  if (shards <= 1) {
    run_range(job, *bound, 0, job.m, out);
    return out;
  }

  std::vector<std::exception_ptr> errors(shards);
  std::vector<std::thread> threads;
  threads.reserve(shards);
  for (uint64_t s = 0; s < shards; ++s) {
    const uint64_t begin = s * chunk;
    const uint64_t end = std::min(job.m, begin + chunk);
    threads.emplace_back([&, s, begin, end] {
      try {
        run_range(job, *bound, begin, end, out);
      } catch (...) {
        errors[s] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) {
    th.join();
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  return out;
}

}  // namespace trevisan
