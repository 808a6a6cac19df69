#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "attnet/ingest.hpp"

namespace attnet {

enum class Topic { World, Politics, Business, Tech, Science, Health, Sports, Arts, Style, Food, Travel, Unknown };

/// The eleven named topics (Unknown excluded), in declaration order.
inline constexpr std::array<Topic, 11> kTopics = {Topic::World,  Topic::Politics, Topic::Business, Topic::Tech,
                                                  Topic::Science, Topic::Health, Topic::Sports,   Topic::Arts,
                                                  Topic::Style,   Topic::Food,   Topic::Travel};

std::string_view topic_name(Topic t) noexcept;
std::optional<Topic> parse_topic(std::string_view name);

/// Lowercases, splits on whitespace, averages the in-vocabulary token
/// vectors, and returns the topic whose own word vector is most cosine
/// similar. Ties go to the lexicographically smallest topic name; an all-OOV
/// phrase is Unknown. Throws EmptyPhrase.
Topic infer_topic(std::string_view phrase, const EmbeddingTable& emb);

/// Caches infer_topic per distinct phrase.
class TopicClassifier {
public:
    explicit TopicClassifier(const EmbeddingTable& emb) : emb_(emb) {}
    Topic operator()(const std::string& phrase);

private:
    const EmbeddingTable& emb_;
    std::map<std::string, Topic> cache_;
};

struct CoverageTopic {
    Topic overall = Topic::Unknown;
    /// Modal topic of each source country's co-mentions toward the target.
    std::map<CountryCode, Topic> per_source;
};

/// Modal topic per source, then modal across sources; lexicographic
/// tie-break at both stages. Throws NoCoverage when no event toward `target`
/// has an in-vocabulary co-mention.
CoverageTopic country_coverage_topic(const std::vector<AttentionEvent>& events, CountryCode target,
                                     const EmbeddingTable& emb);
CoverageTopic country_coverage_topic(const std::vector<AttentionEvent>& events, CountryCode target,
                                     TopicClassifier& classify);

/// Events with at least one co-mention inferred as `topic`.
std::vector<AttentionEvent> filter_events_by_topic(const std::vector<AttentionEvent>& events, Topic topic,
                                                   TopicClassifier& classify);

}  // namespace attnet
