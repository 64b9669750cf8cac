#include <doctest.h>

#include <filesystem>
#include <set>

#include <httplib.h>
#include <json.hpp>

#include "sqt/exemplar/select.hpp"
#include "sqt/util/jsonl.hpp"

using namespace sqt;

namespace {

std::string fixture(const std::string& rel) {
    return std::string(SQT_FIXTURE_DIR) + "/" + rel;
}

// Independent oracle: enumerate every partition of the points into exactly k
// non-empty unlabeled blocks (restricted growth strings) and return the one
// minimizing the within-cluster sum of squares.
double partition_wcss(const std::vector<Eigen::VectorXd>& pts,
                      const std::vector<size_t>& assign, size_t k) {
    double total = 0.0;
    for (size_t c = 0; c < k; ++c) {
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(pts[0].size());
        size_t count = 0;
        for (size_t i = 0; i < pts.size(); ++i)
            if (assign[i] == c) {
                mean += pts[i];
                ++count;
            }
        if (count == 0) continue;
        mean /= double(count);
        for (size_t i = 0; i < pts.size(); ++i)
            if (assign[i] == c) total += (pts[i] - mean).squaredNorm();
    }
    return total;
}

void enumerate_partitions(std::vector<size_t>& assign, size_t i, size_t used, size_t k,
                          const std::vector<Eigen::VectorXd>& pts, double& best,
                          std::vector<size_t>& best_assign) {
    size_t n = pts.size();
    if (n - i < k - used) return;  // cannot still fill every block
    if (i == n) {
        if (used != k) return;
        double w = partition_wcss(pts, assign, k);
        if (w < best) {
            best = w;
            best_assign = assign;
        }
        return;
    }
    for (size_t c = 0; c <= used && c < k; ++c) {
        assign[i] = c;
        enumerate_partitions(assign, i + 1, c == used ? used + 1 : used, k, pts, best,
                             best_assign);
    }
}

std::vector<size_t> oracle_best_partition(const std::vector<Eigen::VectorXd>& pts,
                                          size_t k) {
    std::vector<size_t> assign(pts.size(), 0), best_assign;
    double best = std::numeric_limits<double>::infinity();
    enumerate_partitions(assign, 0, 0, k, pts, best, best_assign);
    return best_assign;
}

// canonical relabeling by first appearance, so unlabeled partitions compare
std::vector<size_t> canonical(const std::vector<size_t>& assign) {
    std::map<size_t, size_t> relabel;
    std::vector<size_t> out;
    for (size_t a : assign) {
        auto [it, _] = relabel.emplace(a, relabel.size());
        out.push_back(it->second);
    }
    return out;
}

struct Fixture12 {
    std::vector<Exemplar> pool;
    std::vector<EmbeddingVector> vectors;
    std::vector<Eigen::VectorXd> points;

    Fixture12() {
        auto manifest = load_manifest(fixture("exemplars/pool.json"));
        TranslationDirection direction{builtin_profile("DBpedia"),
                                       builtin_profile("Wikidata")};
        pool = exemplars_from_manifest(manifest, direction);
        FileEmbeddingProvider provider(fixture("exemplars/vectors_12.txt"));
        std::vector<EmbedRequest> reqs;
        for (const auto& e : pool) reqs.push_back({e.id, e.nlq});
        vectors = provider.embed(reqs);
        for (const auto& v : vectors) points.push_back(v.values);
    }
};

std::string selection_bytes(const SelectionResult& sel) {
    std::string out;
    for (const auto& e : sel.exemplars) {
        out += e.id + "|" + e.nlq + "|" + e.query_kg1 + "|" + e.query_kg2 + "|" +
               render_er2(e.er2) + "\n";
    }
    return out;
}

} // namespace

TEST_CASE("blob fixture: kmeans matches the exhaustive-partition oracle") {
    Fixture12 fx;
    REQUIRE(fx.pool.size() == 12);

    auto oracle = oracle_best_partition(fx.points, 4);
    auto model = cluster_kmeans(fx.points, 4, 42);
    CHECK(canonical(model.assignments) == canonical(oracle));

    // medoid rule: each cluster contributes its nearest-to-centroid member
    auto sel = select_exemplars(fx.pool, fx.vectors, {}, {4, 42, false});
    REQUIRE(sel.exemplars.size() == 4);

    std::set<std::string> selected;
    for (const auto& e : sel.exemplars) selected.insert(e.id);

    std::set<std::string> oracle_medoids;
    for (size_t c = 0; c < 4; ++c) {
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
        size_t count = 0;
        for (size_t i = 0; i < fx.points.size(); ++i)
            if (oracle[i] == c) {
                mean += fx.points[i];
                ++count;
            }
        if (count == 0) continue;
        mean /= double(count);
        std::string best_id;
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < fx.points.size(); ++i) {
            if (oracle[i] != c) continue;
            double d = (fx.points[i] - mean).squaredNorm();
            if (d < best_d || (d == best_d && fx.pool[i].id < best_id)) {
                best_d = d;
                best_id = fx.pool[i].id;
            }
        }
        oracle_medoids.insert(best_id);
    }
    CHECK(selected == oracle_medoids);
}

TEST_CASE("coverage: selected exemplars span k distinct clusters") {
    Fixture12 fx;
    auto sel = select_exemplars(fx.pool, fx.vectors, {}, {4, 7, false});
    std::set<size_t> clusters;
    for (size_t i = 0; i < sel.exemplars.size(); ++i) clusters.insert(i);
    CHECK(clusters.size() == 4);
    // and the four blobs are each represented
    std::set<char> blob_of;
    for (const auto& e : sel.exemplars) {
        int n = std::stoi(e.id.substr(2));
        blob_of.insert(char('A' + (n - 1) / 3));
    }
    CHECK(blob_of.size() == 4);
}

TEST_CASE("four corner points, k=4: zero-distortion optimum") {
    std::vector<Eigen::VectorXd> pts;
    for (auto [x, y] : {std::pair{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}) {
        Eigen::VectorXd v(2);
        v << x, y;
        pts.push_back(v);
    }
    auto model = cluster_kmeans(pts, 4, 3);
    std::set<size_t> distinct(model.assignments.begin(), model.assignments.end());
    CHECK(distinct.size() == 4);
    CHECK(distortion(pts, model) == doctest::Approx(0.0));
    for (size_t i = 0; i < 4; ++i)
        CHECK((pts[i] - model.centroids.row(model.assignments[i]).transpose()).norm() ==
              doctest::Approx(0.0));
}

TEST_CASE("identical points, k=2: repair yields two clusters with equal centroids") {
    std::vector<Eigen::VectorXd> pts;
    for (int i = 0; i < 5; ++i) {
        Eigen::VectorXd v(2);
        v << 3.0, -1.0;
        pts.push_back(v);
    }
    auto model = cluster_kmeans(pts, 2, 11);
    std::set<size_t> distinct(model.assignments.begin(), model.assignments.end());
    CHECK(distinct.size() == 2);
    CHECK((model.centroids.row(0) - model.centroids.row(1)).norm() ==
          doctest::Approx(0.0));
}

TEST_CASE("pool too small and leakage exclusion") {
    Fixture12 fx;
    std::set<std::string> all_ids;
    for (const auto& e : fx.pool) all_ids.insert(e.id);

    // excluding 9 of 12 leaves 3 < k
    std::set<std::string> most(all_ids.begin(), std::prev(all_ids.end(), 3));
    CHECK_THROWS_AS(select_exemplars(fx.pool, fx.vectors, most, {4, 1, false}),
                    PoolTooSmall);

    // excluding one test id: it is never selected
    std::set<std::string> test_ids = {"ex01"};
    auto sel = select_exemplars(fx.pool, fx.vectors, test_ids, {4, 1, false});
    for (const auto& e : sel.exemplars) CHECK(test_ids.count(e.id) == 0);
}

TEST_CASE("pool of exactly k: all selected") {
    Fixture12 fx;
    std::vector<Exemplar> four(fx.pool.begin(), fx.pool.begin() + 4);
    std::vector<EmbeddingVector> vecs(fx.vectors.begin(), fx.vectors.begin() + 4);
    auto sel = select_exemplars(four, vecs, {}, {4, 5, false});
    std::set<std::string> ids;
    for (const auto& e : sel.exemplars) ids.insert(e.id);
    CHECK(ids == std::set<std::string>{"ex01", "ex02", "ex03", "ex04"});
}

TEST_CASE("determinism: identical inputs and seed give identical bytes") {
    Fixture12 fx;
    auto a = select_exemplars(fx.pool, fx.vectors, {"ex05"}, {4, 99, false});
    auto b = select_exemplars(fx.pool, fx.vectors, {"ex05"}, {4, 99, false});
    CHECK(selection_bytes(a) == selection_bytes(b));
    CHECK(a.model.assignments == b.model.assignments);
}

TEST_CASE("cosine option pre-normalizes vectors") {
    // two directions, different magnitudes: cosine treats scaled copies as one
    std::vector<Exemplar> pool(4);
    std::vector<EmbeddingVector> vectors(4);
    for (int i = 0; i < 4; ++i) pool[i].id = "p" + std::to_string(i);
    auto vec = [](double x, double y) {
        Eigen::VectorXd v(2);
        v << x, y;
        return v;
    };
    vectors[0].values = vec(1, 0);
    vectors[1].values = vec(10, 0);   // same direction as p0
    vectors[2].values = vec(0, 1);
    vectors[3].values = vec(0, 10);   // same direction as p2

    auto sel = select_exemplars(pool, vectors, {}, {2, 5, true});
    std::set<char> halves;
    for (const auto& e : sel.exemplars)
        halves.insert(e.id[1] <= '1' ? 'x' : 'y');
    CHECK(halves.size() == 2);  // one exemplar per direction, not per magnitude
}

TEST_CASE("distortion history is non-increasing on random clouds") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Eigen::VectorXd> pts;
        size_t n = 30 + rng() % 40;
        for (size_t i = 0; i < n; ++i) {
            Eigen::VectorXd v(3);
            v << double(rng() % 1000) / 100.0, double(rng() % 1000) / 100.0,
                double(rng() % 1000) / 100.0;
            pts.push_back(v);
        }
        auto model = cluster_kmeans(pts, 2 + rng() % 5, rng());
        REQUIRE(!model.distortion_history.empty());
        for (size_t i = 1; i < model.distortion_history.size(); ++i)
            CHECK(model.distortion_history[i] <=
                  model.distortion_history[i - 1] + 1e-9);
    }
}

TEST_CASE("file provider: verbatim load, repeats, dimension mismatch") {
    FileEmbeddingProvider provider(fixture("exemplars/vectors_12.txt"));
    CHECK(provider.dimension() == 2);
    CHECK(provider.count() == 12);

    auto two = provider.embed({{"ex01", "a"}, {"ex01", "a"}});
    REQUIRE(two.size() == 2);
    CHECK(two[0].values == two[1].values);
    CHECK(two[0].values[0] == doctest::Approx(-0.4));

    CHECK_THROWS_AS(provider.embed({{"missing", "x"}}), ProviderError);

    auto bad = (std::filesystem::temp_directory_path() / "sqt_badvecs.txt").string();
    write_file(bad, "2 2\na 0.1 0.2\nb 0.1 0.2 0.3\n");
    CHECK_THROWS_AS(FileEmbeddingProvider{bad}, DimensionMismatch);
    std::filesystem::remove(bad);
}

TEST_CASE("http embedding provider speaks the de-facto schema") {
    httplib::Server server;
    server.Post("/embeddings", [](const httplib::Request& req, httplib::Response& res) {
        auto body = nlohmann::json::parse(req.body);
        nlohmann::json out;
        out["data"] = nlohmann::json::array();
        int i = 0;
        for (const auto& text : body["input"]) {
            (void)text;
            out["data"].push_back({{"embedding", {double(i), double(i) + 0.5}}});
            ++i;
        }
        res.set_content(out.dump(), "application/json");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    HttpEmbeddingProvider provider("http://127.0.0.1:" + std::to_string(port), "stub-embed");
    auto vecs = embed_texts({"first", "second"}, provider);
    REQUIRE(vecs.size() == 2);
    CHECK(vecs[0].values[0] == doctest::Approx(0.0));
    CHECK(vecs[1].values[0] == doctest::Approx(1.0));
    CHECK(vecs[1].source_text == "second");

    server.stop();
    t.join();
}
