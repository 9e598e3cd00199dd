#pragma once

// Line-oriented catalog cache.
//
//   header:  m variant h power_exponent
//   record:  q a which eps_id eps_conj value            (nonzero norm)
//            q a which eps_id eps_conj 0 Z <type>        (vanishing tuple)
//
// Records appear in tuple order, one per tuple. Output is a pure function of
// the catalog, so identical catalogs serialize to identical bytes.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "shimura/excepsets.hpp"

namespace shimura {

void write_catalog(std::ostream& os, const NormCatalog& c);
std::string catalog_to_string(const NormCatalog& c);

/// Parses a catalog written by write_catalog. The generator fingerprint is
/// not part of the file and is left empty. Throws std::runtime_error on
/// malformed input.
NormCatalog read_catalog(std::istream& is);

/// catalog_m<m>_<variant>_S<fingerprint>.txt
std::filesystem::path catalog_cache_path(const std::filesystem::path& dir, std::int64_t m, Variant v,
                                         const std::string& fingerprint);

/// Checks a loaded catalog against the field and generating set: header,
/// tuple layout, and one recomputed value picked by a fixed-seed generator.
/// Returns a description of the first mismatch, or nullopt.
std::optional<std::string> verify_cached_catalog(const NormCatalog& c, const ImagQuadField& f,
                                                 const GeneratorSet& gens, Variant v);

enum class CacheOutcome { Disabled, Hit, Miss, Stale };
std::string to_string(CacheOutcome o);

struct CachedCatalog {
    NormCatalog catalog;
    CacheOutcome outcome = CacheOutcome::Disabled;
};

/// Loads from cache_dir when a verified file exists, otherwise builds (in
/// parallel) and writes the file. Without a cache_dir it just builds.
CachedCatalog load_or_build_catalog(const ImagQuadField& f, const GeneratorSet& gens, Variant v,
                                    const std::optional<std::filesystem::path>& cache_dir);

}  // namespace shimura
