#pragma once

#include <cstdint>

namespace hetnet {

// Counter-based Philox 4x32-10 stream.  A stream is keyed by (seed,
// realization, substream); draws depend only on that key and the position in
// the stream, so independent realizations can be generated in any order, on
// any number of threads, and always produce the same values.
class PhiloxStream {
public:
    PhiloxStream(std::uint64_t seed, std::uint64_t realization, std::uint32_t substream);

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    double next_double();       // uniform on [0, 1)
    double next_double_open();  // uniform on (0, 1)
    double next_exponential(double mean);
    std::uint64_t next_below(std::uint64_t n);  // uniform on {0, ..., n-1}
    long next_poisson(double mean);

private:
    void fill_block();

    std::uint32_t key_[2];
    std::uint32_t ctr_hi_[2];  // realization word, substream word
    std::uint64_t block_;
    std::uint32_t out_[4];
    int avail_;
};

}  // namespace hetnet
