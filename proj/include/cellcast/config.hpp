#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cellcast/baselines.hpp"
#include "cellcast/preprocess.hpp"
#include "cellcast/synth.hpp"
#include "cellcast/train.hpp"

namespace cellcast {

// Flat `key = value` settings; `#` starts a comment. Unknown keys and
// malformed values raise ValidationError naming the key (and line, when read
// from a file).
class RunConfig {
public:
    static RunConfig parse(std::istream& in);
    static RunConfig load(const std::filesystem::path& path);

    static const std::vector<std::string>& known_keys();

    void set(const std::string& key, const std::string& value);
    std::optional<std::string> get(const std::string& key) const;
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::optional<std::filesystem::path> path(const std::string& key) const;
    // true/false, yes/no, 1/0; absent means false.
    bool flag(const std::string& key) const;
    std::optional<Tech> tech() const;
    std::optional<Indicator> indicator() const;

    SynthConfig synth() const;
    TrainConfig train() const;
    WindowOptions windows() const;
    RuleParams rule() const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace cellcast
