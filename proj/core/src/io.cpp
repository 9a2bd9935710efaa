#include "gbsm/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gbsm/errors.hpp"

namespace gbsm {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("failed reading " + path);
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
    if (!out) throw IoError("failed writing " + path);
}

json parse(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw IoError(std::string("malformed JSON for ") + what);
    return j;
}

std::string full_precision(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

std::string mdp_to_json(const Mdp& m) {
    json rewards = json::array();
    json transitions = json::array();
    for (int s = 0; s < m.num_states; ++s) {
        json row = json::array();
        json cube = json::array();
        for (int a = 0; a < m.num_actions; ++a) {
            row.push_back(m.reward(s, a));
            const auto p = m.row(s, a);
            cube.push_back(json(std::vector<double>(p.begin(), p.end())));
        }
        rewards.push_back(std::move(row));
        transitions.push_back(std::move(cube));
    }
    json j = {{"num_states", m.num_states},
              {"num_actions", m.num_actions},
              {"gamma", m.gamma},
              {"reward_max", m.reward_max},
              {"rewards", std::move(rewards)},
              {"transitions", std::move(transitions)}};
    return j.dump(2) + "\n";
}

Mdp mdp_from_json(const std::string& text) {
    const json j = parse(text, "MDP");
    try {
        Mdp m;
        m.num_states = j.at("num_states").get<int>();
        m.num_actions = j.at("num_actions").get<int>();
        m.gamma = j.at("gamma").get<double>();
        m.reward_max = j.at("reward_max").get<double>();
        const auto& rewards = j.at("rewards");
        const auto& transitions = j.at("transitions");
        if (static_cast<int>(rewards.size()) != m.num_states ||
            static_cast<int>(transitions.size()) != m.num_states)
            throw IoError("MDP JSON arrays do not match num_states");
        m.rewards.reserve(static_cast<size_t>(m.num_states) * m.num_actions);
        m.transitions.reserve(static_cast<size_t>(m.num_states) * m.num_actions * m.num_states);
        for (int s = 0; s < m.num_states; ++s) {
            if (static_cast<int>(rewards[s].size()) != m.num_actions ||
                static_cast<int>(transitions[s].size()) != m.num_actions)
                throw IoError("MDP JSON arrays do not match num_actions");
            for (int a = 0; a < m.num_actions; ++a) {
                m.rewards.push_back(rewards[s][a].get<double>());
                const auto& p = transitions[s][a];
                if (static_cast<int>(p.size()) != m.num_states)
                    throw IoError("MDP JSON transition row length != num_states");
                for (int t = 0; t < m.num_states; ++t)
                    m.transitions.push_back(p[t].get<double>());
            }
        }
        validate_mdp(m);
        return m;
    } catch (const json::exception& e) {
        throw IoError(std::string("bad MDP JSON: ") + e.what());
    }
}

void save_mdp(const Mdp& m, const std::string& path) { write_file(path, mdp_to_json(m)); }

Mdp load_mdp(const std::string& path) { return mdp_from_json(read_file(path)); }

std::string metric_to_json(const MetricMatrix& d) {
    json dist = json::array();
    for (int i = 0; i < d.rows; ++i) {
        const auto* begin = d.dist.data() + static_cast<size_t>(i) * d.cols;
        dist.push_back(json(std::vector<double>(begin, begin + d.cols)));
    }
    json j = {{"rows", d.rows},
              {"cols", d.cols},
              {"dist", std::move(dist)},
              {"iterations", d.iterations},
              {"residual", d.residual}};
    return j.dump(2) + "\n";
}

MetricMatrix metric_from_json(const std::string& text) {
    const json j = parse(text, "metric matrix");
    try {
        MetricMatrix d;
        d.rows = j.at("rows").get<int>();
        d.cols = j.at("cols").get<int>();
        d.iterations = j.at("iterations").get<int>();
        d.residual = j.at("residual").get<double>();
        const auto& dist = j.at("dist");
        if (static_cast<int>(dist.size()) != d.rows)
            throw IoError("metric JSON row count mismatch");
        d.dist.reserve(static_cast<size_t>(d.rows) * d.cols);
        for (int i = 0; i < d.rows; ++i) {
            if (static_cast<int>(dist[i].size()) != d.cols)
                throw IoError("metric JSON column count mismatch");
            for (int jx = 0; jx < d.cols; ++jx) d.dist.push_back(dist[i][jx].get<double>());
        }
        return d;
    } catch (const json::exception& e) {
        throw IoError(std::string("bad metric JSON: ") + e.what());
    }
}

void save_metric(const MetricMatrix& d, const std::string& path) {
    write_file(path, metric_to_json(d));
}

MetricMatrix load_metric(const std::string& path) { return metric_from_json(read_file(path)); }

void save_dataset(const Dataset& data, const std::string& path) {
    std::ostringstream os;
    os << "s,a,s_next,r\n";
    for (const auto& t : data.tuples)
        os << t.s << ',' << t.a << ',' << t.s_next << ',' << full_precision(t.r) << '\n';
    write_file(path, os.str());
}

Dataset load_dataset(const std::string& path) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "s,a,s_next,r")
        throw IoError("dataset CSV missing \"s,a,s_next,r\" header in " + path);
    Dataset data;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        Dataset::Tuple t;
        char comma[3];
        std::istringstream row(line);
        row >> t.s >> comma[0] >> t.a >> comma[1] >> t.s_next >> comma[2] >> t.r;
        if (!row || comma[0] != ',' || comma[1] != ',' || comma[2] != ',')
            throw IoError("malformed dataset CSV at line " + std::to_string(line_no) + " of " +
                          path);
        data.tuples.push_back(t);
    }
    return data;
}

void save_bound_reports(const std::vector<BoundReport>& reports, const std::string& path) {
    if (reports.empty()) throw EmptySet("no bound reports to write");
    std::ostringstream os;
    os << bound_report_csv_header(reports.front()) << '\n';
    for (const auto& r : reports) os << bound_report_csv_row(r) << '\n';
    write_file(path, os.str());
}

} // namespace gbsm
