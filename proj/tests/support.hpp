#pragma once

#include <map>
#include <memory>

#include "klab/kloosterman.hpp"

namespace klab::testing {

// Tables at acceptance scale take seconds to build; share them across test
// cases in this binary.
inline const KloostermanTable& cached_table(u64 p, unsigned n, bool nonunits,
                                            TableSource source = TableSource::SalieFast) {
    static std::map<std::tuple<u64, unsigned, bool, int>, std::unique_ptr<KloostermanTable>> cache;
    auto key = std::make_tuple(p, n, nonunits, int(source));
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto m = PrimePowerModulus::make(p, n);
        auto table = std::make_unique<KloostermanTable>(build_table(m, source, nonunits, 2));
        it = cache.emplace(key, std::move(table)).first;
    }
    return *it->second;
}

} // namespace klab::testing
