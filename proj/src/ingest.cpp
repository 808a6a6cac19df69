#include "attnet/ingest.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "csv.hpp"

namespace attnet {

namespace {

constexpr std::string_view kEventsHeader = "date,source,target,count,co_mentions";
constexpr std::string_view kTrendsHeader = "source,window_start,window_end,target,day,value";
constexpr std::string_view kRegionHeader = "country,region";

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open " + path.string());
    return in;
}

}  // namespace

std::string_view region_name(Region r) noexcept {
    switch (r) {
        case Region::Africa: return "Africa";
        case Region::Americas: return "Americas";
        case Region::Asia: return "Asia";
        case Region::Europe: return "Europe";
        case Region::Oceania: return "Oceania";
    }
    return "?";
}

Region parse_region(std::string_view label) {
    for (Region r : kAllRegions) {
        if (region_name(r) == label) return r;
    }
    throw Error(Errc::UnknownRegionLabel, "'" + std::string(label) + "'");
}

void EmbeddingTable::add(std::string word, std::vector<double> vec) {
    if (vec.size() != dim_) {
        throw Error(Errc::DimensionMismatch, "'" + word + "' has " + std::to_string(vec.size()) +
                                                 " components, expected " + std::to_string(dim_));
    }
    auto [it, inserted] = index_.emplace(std::move(word), std::move(vec));
    if (!inserted) throw Error(Errc::MalformedRow, "duplicate embedding word '" + it->first + "'");
}

const std::vector<double>* EmbeddingTable::find(std::string_view word) const {
    auto it = index_.find(std::string(word));
    return it == index_.end() ? nullptr : &it->second;
}

EventLoad read_attention_events(std::istream& in, Period period) {
    csv::LineReader reader(in);
    csv::expect_header(reader, kEventsHeader);
    EventLoad result;
    std::string line;
    while (reader.next(line)) {
        const auto n = reader.lineno();
        const auto fields = csv::split(line);
        if (fields.size() != 5) csv::malformed(n, "expected 5 fields, got " + std::to_string(fields.size()));
        AttentionEvent ev;
        ev.date = csv::parse_day(fields[0], n);
        ev.source = csv::parse_code(fields[1], n);
        ev.target = csv::parse_code(fields[2], n);
        ev.count = csv::parse_int<std::int64_t>(fields[3], n, "count");
        if (ev.count < 0) csv::malformed(n, "negative count");
        if (!fields[4].empty()) {
            for (auto item : csv::split(fields[4], ';')) {
                if (item.empty()) csv::malformed(n, "empty co-mention");
                ev.co_mentions.emplace_back(item);
            }
        }
        if (!period.contains(ev.date)) {
            ++result.out_of_period;
            continue;
        }
        result.events.push_back(std::move(ev));
    }
    return result;
}

EventLoad load_attention_events(const std::filesystem::path& path, Period period) {
    auto in = open_input(path);
    return read_attention_events(in, period);
}

std::vector<TrendsWindow> read_trends_windows(std::istream& in) {
    csv::LineReader reader(in);
    csv::expect_header(reader, kTrendsHeader);

    using Key = std::pair<CountryCode, Date>;
    std::map<Key, TrendsWindow> windows;
    std::map<Key, std::map<CountryCode, std::vector<bool>>> seen;

    std::string line;
    while (reader.next(line)) {
        const auto n = reader.lineno();
        const auto fields = csv::split(line);
        if (fields.size() != 6) csv::malformed(n, "expected 6 fields, got " + std::to_string(fields.size()));
        const auto source = csv::parse_code(fields[0], n);
        const auto start = csv::parse_day(fields[1], n);
        const auto end = csv::parse_day(fields[2], n);
        const auto target = csv::parse_code(fields[3], n);
        const auto day = csv::parse_day(fields[4], n);
        const int value = csv::parse_int<int>(fields[5], n, "value");
        if (value < 0 || value > 100) csv::malformed(n, "value " + std::to_string(value) + " outside [0,100]");
        if (end < start) csv::malformed(n, "window ends before it starts");

        const Key key{source, start};
        auto [it, fresh] = windows.try_emplace(key);
        TrendsWindow& w = it->second;
        if (fresh) {
            w.source = source;
            w.start_date = start;
            w.end_date = end;
        } else if (w.end_date != end) {
            csv::malformed(n, "window starting " + format_date(start) + " declared with two end dates");
        }
        if (day < start || day > end) {
            throw Error(Errc::LengthMismatch, "line " + std::to_string(n) + ": day " + format_date(day) +
                                                  " outside window " + format_date(start) + ".." + format_date(end));
        }
        const auto len = static_cast<std::size_t>(w.length());
        auto& series = w.values[target];
        auto& mask = seen[key][target];
        if (series.empty()) {
            series.assign(len, 0);
            mask.assign(len, false);
        }
        const auto idx = static_cast<std::size_t>(day_offset(start, day));
        if (mask[idx]) csv::malformed(n, "duplicate day " + format_date(day) + " for " + target.str());
        mask[idx] = true;
        series[idx] = value;
    }

    std::vector<TrendsWindow> out;
    out.reserve(windows.size());
    for (auto& [key, w] : windows) out.push_back(std::move(w));
    return out;
}

std::vector<TrendsWindow> load_trends_windows(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_trends_windows(in);
}

RegionMap read_region_map(std::istream& in) {
    csv::LineReader reader(in);
    csv::expect_header(reader, kRegionHeader);
    RegionMap out;
    std::string line;
    while (reader.next(line)) {
        const auto n = reader.lineno();
        const auto fields = csv::split(line);
        if (fields.size() != 2) csv::malformed(n, "expected 2 fields");
        const auto code = csv::parse_code(fields[0], n);
        const auto region = parse_region(fields[1]);
        auto [it, inserted] = out.emplace(code, region);
        if (!inserted && it->second != region) csv::malformed(n, code.str() + " mapped to two regions");
    }
    return out;
}

RegionMap load_region_map(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_region_map(in);
}

EmbeddingTable read_embeddings(std::istream& in) {
    std::optional<EmbeddingTable> table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream row(line);
        std::string word;
        if (!(row >> word)) continue;
        std::vector<double> vec;
        std::string tok;
        while (row >> tok) vec.push_back(csv::parse_real(tok, lineno, "embedding component"));
        if (vec.empty()) csv::malformed(lineno, "embedding row without components");
        if (!table) table.emplace(vec.size());
        table->add(std::move(word), std::move(vec));
    }
    return table ? std::move(*table) : EmbeddingTable{};
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_embeddings(in);
}

void write_attention_events(std::ostream& out, const std::vector<AttentionEvent>& events) {
    out << kEventsHeader << '\n';
    for (const auto& ev : events) {
        out << format_date(ev.date) << ',' << ev.source.str() << ',' << ev.target.str() << ',' << ev.count << ',';
        for (std::size_t i = 0; i < ev.co_mentions.size(); ++i) {
            if (i) out << ';';
            out << ev.co_mentions[i];
        }
        out << '\n';
    }
}

void write_trends_windows(std::ostream& out, const std::vector<TrendsWindow>& windows) {
    out << kTrendsHeader << '\n';
    for (const auto& w : windows) {
        const auto start = format_date(w.start_date);
        const auto end = format_date(w.end_date);
        for (const auto& [target, series] : w.values) {
            for (std::size_t i = 0; i < series.size(); ++i) {
                out << w.source.str() << ',' << start << ',' << end << ',' << target.str() << ','
                    << format_date(w.start_date + std::chrono::days(static_cast<int>(i))) << ',' << series[i] << '\n';
            }
        }
    }
}

void write_region_map(std::ostream& out, const RegionMap& regions) {
    out << kRegionHeader << '\n';
    for (const auto& [code, region] : regions) out << code.str() << ',' << region_name(region) << '\n';
}

}  // namespace attnet
