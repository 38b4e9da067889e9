#include "tpsqli/feedback.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tpsqli/errors.hpp"

namespace tpsqli {
namespace {

using nlohmann::json;

json technique_map_to_json(const std::map<Technique, double>& m) {
    json out = json::object();
    for (const auto& [t, v] : m) out[std::string(1, technique_letter(t))] = v;
    return out;
}

json technique_map_to_json(const std::map<Technique, bool>& m) {
    json out = json::object();
    for (const auto& [t, v] : m) out[std::string(1, technique_letter(t))] = v;
    return out;
}

template <typename T>
std::map<Technique, T> technique_map_from_json(const json& j) {
    std::map<Technique, T> out;
    for (const auto& [letter, value] : j.items()) {
        if (letter.size() != 1) throw ValidationError("technique letters expected");
        out[technique_from_letter(letter[0])] = value.template get<T>();
    }
    return out;
}

const char* kProfileKeys[] = {"weights", "scores", "exploit_seconds", "exploited",
                              "payload_risks"};

json profile_to_json(const TargetProfile& p) {
    json out;
    out["weights"] = technique_map_to_json(p.weights.weights);
    out["scores"] = technique_map_to_json(p.scores);
    out["exploit_seconds"] = technique_map_to_json(p.exploit_seconds);
    out["exploited"] = technique_map_to_json(p.exploited);
    out["payload_risks"] = json::object();
    for (const auto& [id, risk] : p.payload_risks) out["payload_risks"][id] = risk;
    return out;
}

TargetProfile profile_from_json(const std::string& target_id, const json& j) {
    TargetProfile p = TargetProfile::fresh(target_id);
    p.weights.weights = technique_map_from_json<double>(j.at("weights"));
    p.scores = technique_map_from_json<double>(j.at("scores"));
    p.exploit_seconds = technique_map_from_json<double>(j.at("exploit_seconds"));
    p.exploited = technique_map_from_json<bool>(j.at("exploited"));
    if (j.contains("payload_risks")) {
        for (const auto& [id, risk] : j.at("payload_risks").items()) {
            const int r = risk.get<int>();
            if (r < 1 || r > 3) {
                throw ValidationError("profile '" + target_id + "': risk out of range");
            }
            p.payload_risks[id] = r;
        }
    }
    return p;
}

// Advisory exclusive lock held for the lifetime of the object.
class FileLock {
public:
    explicit FileLock(const std::string& path) {
        fd_ = ::open(path.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd_ >= 0) ::flock(fd_, LOCK_EX);
    }
    ~FileLock() {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }

private:
    int fd_ = -1;
};

}  // namespace

FeedbackStore::FeedbackStore() = default;

FeedbackStore FeedbackStore::from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("feedback: ") + e.what(), e.byte);
    }

    FeedbackStore store;
    try {
        if (doc.contains("version")) {
            const auto& v = doc.at("version");
            store.version_ = v.is_string() ? std::stoi(v.get<std::string>()) : v.get<int>();
        }
        if (store.version_ > kFeedbackSchemaVersion) {
            throw ValidationError("feedback schema version " + std::to_string(store.version_) +
                                  " is newer than the supported version " +
                                  std::to_string(kFeedbackSchemaVersion));
        }
        if (doc.contains("profiles")) {
            for (const auto& [id, jp] : doc.at("profiles").items()) {
                store.profiles_[id] = profile_from_json(id, jp);
                json extras = json::object();
                for (const auto& [key, value] : jp.items()) {
                    bool known = false;
                    for (const char* k : kProfileKeys) {
                        if (key == k) known = true;
                    }
                    if (!known) extras[key] = value;
                }
                if (!extras.empty()) store.profile_extras_[id] = extras;
            }
        }
        if (doc.contains("history")) {
            store.history_ = doc.at("history");
            if (!store.history_.is_array()) throw ValidationError("feedback: history must be a list");
        }
        for (const auto& [key, value] : doc.items()) {
            if (key != "version" && key != "profiles" && key != "history") {
                store.extras_[key] = value;
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("feedback: ") + e.what());
    }
    return store;
}

FeedbackStore FeedbackStore::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return FeedbackStore{};  // absent file is an empty store
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

std::string FeedbackStore::to_json_text() const {
    json doc = extras_;
    doc["version"] = version_;
    doc["profiles"] = json::object();
    for (const auto& [id, profile] : profiles_) {
        json jp = profile_to_json(profile);
        auto extras = profile_extras_.find(id);
        if (extras != profile_extras_.end()) {
            for (const auto& [key, value] : extras->second.items()) jp[key] = value;
        }
        doc["profiles"][id] = jp;
    }
    doc["history"] = history_;
    return doc.dump(2) + "\n";
}

void FeedbackStore::save(const std::string& path) const {
    FileLock lock(path);
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write feedback file '" + path + "'");
        out << to_json_text();
    }
    std::filesystem::rename(tmp, path);
}

std::optional<TargetProfile> FeedbackStore::profile_for(const std::string& target_id) const {
    auto it = profiles_.find(target_id);
    if (it == profiles_.end()) return std::nullopt;
    return it->second;
}

void FeedbackStore::put_profile(const TargetProfile& profile) {
    profiles_[profile.target_id] = profile;
}

void FeedbackStore::append_history(const std::string& target_id, const RoundResult& result,
                                   const std::string& wall_time) {
    json entry;
    entry["time"] = wall_time;
    entry["target_id"] = target_id;
    entry["trials"] = result.trials.size();
    entry["vulnerabilities"] = result.vulnerabilities.size();
    entry["order"] = order_letters(result.order_trace);
    history_.push_back(entry);
}

bool FeedbackStore::operator==(const FeedbackStore& other) const {
    return to_json_text() == other.to_json_text();
}

std::string default_feedback_path() {
    const char* env = std::getenv("TPSQLI_FEEDBACK");
    if (env && *env) return env;
    return "feedback.json";
}

}  // namespace tpsqli
