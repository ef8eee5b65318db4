#include "pqmp/rng.hpp"

namespace pqmp {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

RngStream RngStream::derive(std::uint64_t run_seed, RngDomain domain, std::uint64_t entity) {
    std::uint64_t h = splitmix64(run_seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(domain));
    h = splitmix64(h ^ entity);
    return RngStream(h);
}

}  // namespace pqmp
