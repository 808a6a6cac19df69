#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "attnet/core.hpp"

namespace attnet {

struct AttentionEvent {
    Date date;
    CountryCode source;
    CountryCode target;
    std::int64_t count = 0;
    std::vector<std::string> co_mentions;

    bool operator==(const AttentionEvent&) const = default;
};

struct EventLoad {
    std::vector<AttentionEvent> events;
    /// Rows whose date fell outside the requested period; they are dropped.
    std::size_t out_of_period = 0;
};

/// Search-volume panel for one source country over one request window.
/// Every vector has exactly `length()` entries, one per day, both endpoints
/// included. Days absent from the file read as 0.
struct TrendsWindow {
    CountryCode source;
    Date start_date;
    Date end_date;
    std::map<CountryCode, std::vector<int>> values;

    int length() const { return day_offset(start_date, end_date) + 1; }
    bool operator==(const TrendsWindow&) const = default;
};

enum class Region { Africa, Americas, Asia, Europe, Oceania };

inline constexpr std::array<Region, 5> kAllRegions = {Region::Africa, Region::Americas, Region::Asia,
                                                      Region::Europe, Region::Oceania};

std::string_view region_name(Region r) noexcept;
/// Throws Errc::UnknownRegionLabel.
Region parse_region(std::string_view label);

using RegionMap = std::map<CountryCode, Region>;

class EmbeddingTable {
public:
    explicit EmbeddingTable(std::size_t dimension = 0) : dim_(dimension) {}

    std::size_t dimension() const noexcept { return dim_; }
    std::size_t size() const noexcept { return index_.size(); }

    /// Throws DimensionMismatch on wrong length, MalformedRow on a duplicate word.
    void add(std::string word, std::vector<double> vec);
    const std::vector<double>* find(std::string_view word) const;

private:
    std::size_t dim_;
    std::unordered_map<std::string, std::vector<double>> index_;
};

// Loaders. The stream overloads take a source name that is only used in messages.

EventLoad load_attention_events(const std::filesystem::path& path, Period period = Period::collection_default());
EventLoad read_attention_events(std::istream& in, Period period = Period::collection_default());

std::vector<TrendsWindow> load_trends_windows(const std::filesystem::path& path);
std::vector<TrendsWindow> read_trends_windows(std::istream& in);

RegionMap load_region_map(const std::filesystem::path& path);
RegionMap read_region_map(std::istream& in);

EmbeddingTable load_embeddings(const std::filesystem::path& path);
EmbeddingTable read_embeddings(std::istream& in);

// Writers produce exactly the format the loaders accept.

void write_attention_events(std::ostream& out, const std::vector<AttentionEvent>& events);
void write_trends_windows(std::ostream& out, const std::vector<TrendsWindow>& windows);
void write_region_map(std::ostream& out, const RegionMap& regions);

}  // namespace attnet
