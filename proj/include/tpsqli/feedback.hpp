#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tpsqli/executor.hpp"

namespace tpsqli {

inline constexpr int kFeedbackSchemaVersion = 1;

// Persistent between-round state: one profile per injection point plus an
// append-only history of round digests. Unknown fields found in a stored file
// survive a load/save cycle verbatim.
class FeedbackStore {
public:
    FeedbackStore();

    // Missing file -> empty store. Corrupt file -> ParseError carrying the
    // byte offset. A schema version above kFeedbackSchemaVersion is refused
    // with a ValidationError.
    static FeedbackStore load(const std::string& path);
    static FeedbackStore from_json_text(const std::string& text);

    // Canonical serialization (sorted keys, two-space indent, trailing
    // newline). save() holds an advisory lock on the file while writing.
    std::string to_json_text() const;
    void save(const std::string& path) const;

    int version() const { return version_; }

    const std::map<std::string, TargetProfile>& profiles() const { return profiles_; }
    std::optional<TargetProfile> profile_for(const std::string& target_id) const;
    void put_profile(const TargetProfile& profile);

    const nlohmann::json& history() const { return history_; }
    void append_history(const std::string& target_id, const RoundResult& result,
                        const std::string& wall_time);

    bool operator==(const FeedbackStore& other) const;

private:
    int version_ = kFeedbackSchemaVersion;
    std::map<std::string, TargetProfile> profiles_;
    std::map<std::string, nlohmann::json> profile_extras_;  // unknown per-profile fields
    nlohmann::json history_ = nlohmann::json::array();
    nlohmann::json extras_ = nlohmann::json::object();  // unknown top-level fields
};

// Default feedback file path: $TPSQLI_FEEDBACK when set, else "feedback.json".
std::string default_feedback_path();

}  // namespace tpsqli
