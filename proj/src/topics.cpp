#include "attnet/topics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace attnet {

std::string_view topic_name(Topic t) noexcept {
    switch (t) {
        case Topic::World: return "world";
        case Topic::Politics: return "politics";
        case Topic::Business: return "business";
        case Topic::Tech: return "tech";
        case Topic::Science: return "science";
        case Topic::Health: return "health";
        case Topic::Sports: return "sports";
        case Topic::Arts: return "arts";
        case Topic::Style: return "style";
        case Topic::Food: return "food";
        case Topic::Travel: return "travel";
        case Topic::Unknown: return "unknown";
    }
    return "unknown";
}

std::optional<Topic> parse_topic(std::string_view name) {
    for (Topic t : kTopics) {
        if (topic_name(t) == name) return t;
    }
    if (name == "unknown") return Topic::Unknown;
    return std::nullopt;
}

namespace {

// Named topics sorted by name, so the first maximum is the tie winner.
std::vector<Topic> topics_by_name() {
    std::vector<Topic> v(kTopics.begin(), kTopics.end());
    std::sort(v.begin(), v.end(), [](Topic a, Topic b) { return topic_name(a) < topic_name(b); });
    return v;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0 || nb == 0) return -2.0;  // below any real cosine
    return dot / std::sqrt(na * nb);
}

Topic modal(const std::map<Topic, int>& counts) {
    Topic best = Topic::Unknown;
    int best_count = 0;
    for (Topic t : topics_by_name()) {
        auto it = counts.find(t);
        if (it != counts.end() && it->second > best_count) {
            best = t;
            best_count = it->second;
        }
    }
    return best;
}

}  // namespace

Topic infer_topic(std::string_view phrase, const EmbeddingTable& emb) {
    std::string lower(phrase);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    std::istringstream tokens(lower);
    std::string tok;
    std::vector<double> mean(emb.dimension(), 0.0);
    int found = 0, total = 0;
    while (tokens >> tok) {
        ++total;
        if (const auto* v = emb.find(tok)) {
            for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += (*v)[i];
            ++found;
        }
    }
    if (total == 0) throw Error(Errc::EmptyPhrase, "empty co-mention phrase");
    if (found == 0) return Topic::Unknown;
    for (double& x : mean) x /= found;

    Topic best = Topic::Unknown;
    double best_sim = -3.0;
    for (Topic t : topics_by_name()) {
        const auto* seed = emb.find(topic_name(t));
        if (!seed) continue;
        const double sim = cosine(mean, *seed);
        if (sim > best_sim) {
            best_sim = sim;
            best = t;
        }
    }
    return best;
}

Topic TopicClassifier::operator()(const std::string& phrase) {
    auto it = cache_.find(phrase);
    if (it != cache_.end()) return it->second;
    const Topic t = infer_topic(phrase, emb_);
    cache_.emplace(phrase, t);
    return t;
}

CoverageTopic country_coverage_topic(const std::vector<AttentionEvent>& events, CountryCode target,
                                     TopicClassifier& classify) {
    std::map<CountryCode, std::map<Topic, int>> per_source;
    for (const auto& ev : events) {
        if (ev.target != target) continue;
        for (const auto& cm : ev.co_mentions) {
            const Topic t = classify(cm);
            if (t != Topic::Unknown) ++per_source[ev.source][t];
        }
    }
    if (per_source.empty()) throw Error(Errc::NoCoverage, target.str() + " has no classifiable co-mentions");
    CoverageTopic out;
    std::map<Topic, int> across;
    for (const auto& [source, counts] : per_source) {
        const Topic t = modal(counts);
        out.per_source.emplace(source, t);
        ++across[t];
    }
    out.overall = modal(across);
    return out;
}

CoverageTopic country_coverage_topic(const std::vector<AttentionEvent>& events, CountryCode target,
                                     const EmbeddingTable& emb) {
    TopicClassifier classify(emb);
    return country_coverage_topic(events, target, classify);
}

std::vector<AttentionEvent> filter_events_by_topic(const std::vector<AttentionEvent>& events, Topic topic,
                                                   TopicClassifier& classify) {
    std::vector<AttentionEvent> out;
    for (const auto& ev : events) {
        const bool hit = std::any_of(ev.co_mentions.begin(), ev.co_mentions.end(),
                                     [&](const std::string& cm) { return classify(cm) == topic; });
        if (hit) out.push_back(ev);
    }
    return out;
}

}  // namespace attnet
