// Copyright 2026 The dqcsim Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Runs every .qasm file in a directory and compares with its .golden file.
#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dqcsim/errors.hpp"
#include "dqcsim/qasm/qasm.hpp"

namespace corpus {

struct Outcome {
    std::string file;
    bool malformed = false; // golden records an error
    bool matches = false;
    std::string actual;
};

inline std::string slurp(const std::filesystem::path &p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

/// Parse + lower + dump, or "error: <message>\n" on a parse failure.
inline std::string render(const std::string &source) {
    try {
        return dqcsim::qasm::dump(dqcsim::qasm::lower_to_circuit(dqcsim::qasm::parse_qasm(source)));
    } catch (const dqcsim::ParseError &e) {
        return std::string("error: ") + e.what() + "\n";
    }
}

inline std::vector<Outcome> run(const std::filesystem::path &dir) {
    std::vector<std::filesystem::path> files;
    for (const auto &e : std::filesystem::directory_iterator(dir)) {
        if (e.path().extension() == ".qasm") {
            files.push_back(e.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<Outcome> out;
    for (const auto &f : files) {
        auto golden = f;
        golden.replace_extension(".golden");
        const std::string expected = slurp(golden);
        Outcome o;
        o.file = f.filename().string();
        o.malformed = expected.rfind("error: ", 0) == 0;
        o.actual = render(slurp(f));
        o.matches = std::filesystem::exists(golden) && o.actual == expected;
        out.push_back(std::move(o));
    }
    return out;
}

} // namespace corpus
