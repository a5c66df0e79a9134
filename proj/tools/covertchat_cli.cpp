// covertchat: hide authenticated ciphertexts and DH public keys inside
// generated chat text, and recover them on the receiving side.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "covertchat/analysis.hpp"
#include "covertchat/channel.hpp"
#include "covertchat/ecdhe.hpp"
#include "covertchat/errors.hpp"
#include "covertchat/remote_model.hpp"
#include "covertchat/symmetric.hpp"
#include "covertchat/transcript.hpp"
#include "covertchat/xof.hpp"

namespace cc = covertchat;
using nlohmann::json;

namespace covertchat::tools {
extern const char* kBuiltinCorpus; // generated from tools/data/chat_corpus.txt
}

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitDecryptFail = 2;
constexpr int kExitEmbeddingStuck = 3;
constexpr int kExitProtocolFailure = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cc::Error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string read_stdin() {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
}

std::string strip_trailing_newlines(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

// secrets come from a file or the environment, never from argv
std::string load_secret(const std::string& file, const char* env_var) {
    if (!file.empty()) return strip_trailing_newlines(read_file(file));
    if (const char* env = std::getenv(env_var)) return env;
    throw cc::Error(std::string("no secret: pass a file or set ") + env_var);
}

struct ModelOptions {
    std::string corpus_file;
    std::string endpoint;
    std::string model_name;

    void attach(CLI::App* cmd) {
        cmd->add_option("--corpus", corpus_file,
                        "text corpus for the offline reference model "
                        "(default: bundled chat corpus)");
        cmd->add_option("--endpoint", endpoint,
                        "OpenAI-compatible completions endpoint (overrides "
                        "--corpus; env COVERT_ENDPOINT)");
        cmd->add_option("--model-name", model_name, "model field for remote requests");
    }

    std::unique_ptr<cc::TokenModel> build() const {
        std::string url = endpoint;
        if (url.empty()) {
            if (const char* env = std::getenv("COVERT_ENDPOINT")) url = env;
        }
        if (!url.empty()) {
            cc::RemoteModel::Options options;
            options.endpoint = url;
            if (const char* key = std::getenv("COVERT_API_KEY")) options.api_key = key;
            options.model_name = model_name;
            return std::make_unique<cc::RemoteModel>(options);
        }
        std::string corpus = corpus_file.empty() ? std::string(cc::tools::kBuiltinCorpus)
                                                 : read_file(corpus_file);
        return std::make_unique<cc::BigramModel>(cc::BigramModel::from_corpus(corpus));
    }
};

struct SharedOptions {
    std::string salt_hex;
    std::string nonce_hex = "000000000000000000000000";
    std::string ad_hex;
    unsigned count = 600000;
    int level = 4;
    int sec = 32;
    std::size_t d_o = 32;
    unsigned chunk_size = 5;
    std::string alphabet;
    int top_f = 0;

    void attach(CLI::App* cmd, bool with_nonce) {
        cmd->add_option("--salt", salt_hex, "PBKDF2 salt, hex")->required();
        if (with_nonce) {
            cmd->add_option("--nonce", nonce_hex, "AEAD nonce, 24 hex symbols");
            cmd->add_option("--ad", ad_hex, "associated data, hex");
        }
        cmd->add_option("--count", count, "PBKDF2 iteration count");
        cmd->add_option("--level", level, "alphabet level 1..4")
            ->check(CLI::Range(1, 4));
        cmd->add_option("--sec", sec, "security parameter")
            ->check(CLI::IsMember({16, 32, 48, 64, 96, 128}));
        cmd->add_option("--d-o", d_o, "minimum gap between embedding positions");
        cmd->add_option("--chunk-size", chunk_size, "XOF chunk width in bits");
        cmd->add_option("--alphabet", alphabet,
                        "custom ordered character set, e.g. \" ETAONISRHDLUCMF\"");
        cmd->add_option("--top-f", top_f,
                        "override the temperature-retry budget (default: derived "
                        "from sec and level)");
    }

    cc::SharedParams params() const {
        cc::SharedParams p;
        p.salt = cc::from_hex(salt_hex);
        p.nonce = cc::from_hex(nonce_hex);
        p.associated_data = ad_hex.empty() ? cc::Bytes{} : cc::from_hex(ad_hex);
        p.count = count;
        p.level = level;
        if (!alphabet.empty()) p.alphabet_chars = alphabet;
        p.d_o = d_o;
        p.chunk_size = chunk_size;
        return p;
    }

    cc::EmbedderConfig embedder() const {
        cc::EmbedderConfig config = cc::analysis::default_embedder_config(sec, level);
        if (!alphabet.empty()) config.alphabet = cc::Alphabet(level, alphabet);
        if (top_f > 0) config.top_f = top_f;
        config.d_o = d_o;
        return config;
    }
};

std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(seed != 0 ? seed : std::random_device{}());
}

std::string key_fingerprint(const std::string& shared_hex) {
    cc::Bytes digest = cc::shake128(cc::from_hex(shared_hex), 8);
    return cc::to_hex(digest);
}

int run_encrypt(const ModelOptions& model_opts, const SharedOptions& shared,
                const std::string& password_file, const std::string& topic,
                const std::string& in_file, std::uint64_t seed, bool json_out) {
    std::string password = load_secret(password_file, "COVERT_PASSWORD");
    std::string plaintext = in_file.empty() ? read_stdin() : read_file(in_file);
    auto model = model_opts.build();
    auto rng = make_rng(seed);
    cc::SharedParams params = shared.params();
    std::string story =
        cc::encrypt_to_story(password, cc::str_to_bytes(plaintext), topic, *model,
                             params, shared.embedder(), rng);
    if (json_out) {
        json meta = {{"story", story},
                     {"level", params.level},
                     {"sec", shared.sec},
                     {"story_scalars", cc::utf8_length(story)},
                     {"plaintext_bytes", plaintext.size()},
                     {"plaintext_bits", plaintext.size() * 8 + 128},
                     {"embedded_chars",
                      cc::digits_from_bytes(cc::Bytes(plaintext.size() + 16, 0),
                                            params.level)
                          .size()}};
        std::cout << meta.dump(2) << "\n";
    } else {
        std::cout << story << "\n";
    }
    return 0;
}

int run_decrypt(const SharedOptions& shared, const std::string& password_file,
                const std::string& in_file) {
    std::string password = load_secret(password_file, "COVERT_PASSWORD");
    std::string story = in_file.empty() ? read_stdin() : read_file(in_file);
    story = strip_trailing_newlines(story);
    auto plaintext = cc::decrypt_from_story(password, story, shared.params());
    if (!plaintext) {
        std::cerr << "decryption failed: wrong key material or tampered story\n";
        return kExitDecryptFail;
    }
    std::cout << cc::bytes_to_str(*plaintext);
    return 0;
}

int run_exchange(const ModelOptions& model_opts, const ModelOptions& peer_model_opts,
                 const SharedOptions& shared, const std::string& mode,
                 const std::string& curve_name, const std::string& topic,
                 const std::string& rootkey_file, const std::string& host,
                 std::uint16_t port, std::size_t m, std::size_t low,
                 std::uint64_t seed, bool annotate, bool toy_defaults,
                 bool json_out) {
    cc::ExchangeConfig config =
        toy_defaults ? cc::ExchangeConfig::toy_profile() : cc::ExchangeConfig{};
    config.curve = cc::curve_from_name(curve_name);
    if (m != 0) config.m = m;
    if (low != 0) config.low = low;
    config.salt = cc::from_hex(shared.salt_hex);
    config.count = shared.count;
    config.d_o = shared.d_o;
    config.chunk_size = shared.chunk_size;
    config.topic = topic;
    config.seed = seed;
    if (!shared.alphabet.empty()) {
        config.embedder.alphabet = cc::Alphabet(shared.level, shared.alphabet);
    }
    config.embedder.sec = shared.sec;
    config.embedder.top_f = shared.top_f > 0
                                ? shared.top_f
                                : cc::analysis::min_top_f(shared.sec, 4);
    config.embedder.d_o = shared.d_o;
    if (!rootkey_file.empty() || std::getenv("COVERT_ROOTKEY")) {
        config.rootkey = load_secret(rootkey_file, "COVERT_ROOTKEY");
    }

    auto model = model_opts.build();
    config.model = model.get();

    auto report = [&](const cc::ExchangeOutcome& outcome, const std::string& who) {
        if (json_out) {
            json meta = {{"party", who},
                         {"fingerprint", key_fingerprint(outcome.shared_key_hex)},
                         {"rounds", outcome.composition.parts.size()},
                         {"messages", outcome.transcript.size()}};
            std::cout << meta.dump(2) << "\n";
        } else {
            std::cout << who << " shared-key fingerprint: "
                      << key_fingerprint(outcome.shared_key_hex) << "\n";
        }
    };

    if (mode == "inproc") {
        cc::ExchangeConfig peer = config;
        peer.seed = seed != 0 ? seed + 1 : 0;
        auto peer_model = peer_model_opts.corpus_file.empty() &&
                                  peer_model_opts.endpoint.empty()
                              ? nullptr
                              : peer_model_opts.build();
        peer.model = peer_model ? peer_model.get() : model.get();
        auto [a, b] = cc::run_exchange(config, peer);
        report(a, "alice");
        report(b, "bob");
        if (annotate) {
            cc::Transcript transcript;
            transcript.messages = a.transcript;
            cc::annotate_schedule(transcript, "alice", a.own_schedule);
            cc::annotate_schedule(transcript, "bob", a.peer_schedule);
            std::cout << "\n" << cc::render_annotated(transcript);
        }
        return a.shared_key_hex == b.shared_key_hex ? 0 : kExitProtocolFailure;
    }

    std::unique_ptr<cc::Channel> channel;
    cc::Role role;
    if (mode == "tcp-listen") {
        channel = cc::tcp_listen(port);
        role = cc::Role::initiator;
    } else if (mode == "tcp-connect") {
        channel = cc::tcp_connect(host, port);
        role = cc::Role::responder;
    } else {
        throw cc::Error("mode must be inproc, tcp-listen or tcp-connect");
    }
    cc::ExchangeOutcome outcome = cc::run_party(config, role, *channel);
    report(outcome, role == cc::Role::initiator ? "initiator" : "responder");
    if (annotate) {
        cc::Transcript transcript;
        transcript.messages = outcome.transcript;
        std::string own = role == cc::Role::initiator ? "alice" : "bob";
        std::string peer = role == cc::Role::initiator ? "bob" : "alice";
        cc::annotate_schedule(transcript, own, outcome.own_schedule);
        cc::annotate_schedule(transcript, peer, outcome.peer_schedule);
        std::cout << "\n" << cc::render_annotated(transcript);
    }
    return 0;
}

int run_analyze_topf(int sec, int level, bool grid, const std::string& table_file) {
    cc::analysis::FrequencyTable table =
        table_file.empty() ? cc::analysis::FrequencyTable::builtin_english()
                           : cc::analysis::FrequencyTable::load_file(table_file);
    if (grid) {
        cc::analysis::SecurityTable security = cc::analysis::build_security_table(table);
        std::cout << "sec\\level";
        for (int l = 1; l <= 4; ++l) std::cout << "\t" << l;
        std::cout << "\n";
        for (int s : cc::analysis::kSecLevels) {
            std::cout << s;
            for (int l = 1; l <= 4; ++l) std::cout << "\t" << security.at(s, l);
            std::cout << "\n";
        }
        return 0;
    }
    int top_f = cc::analysis::min_top_f(sec, level, table);
    double bound = cc::analysis::p_dist_bound(
        table.min_freq(cc::Alphabet::default_for_level(level)), top_f);
    std::cout << "top_f(sec=" << sec << ", level=" << level << ") = " << top_f
              << "  (P_dist bound " << bound << " <= 2^-" << sec << ")\n";
    return 0;
}

std::vector<std::string> load_story_dir(const std::string& dir) {
    std::vector<std::string> stories;
    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file()) paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    for (const auto& path : paths) {
        stories.push_back(strip_trailing_newlines(read_file(path.string())));
    }
    return stories;
}

int run_analyze_tokstat(const std::string& embedded_dir, const std::string& plain_dir,
                        std::size_t min_stories) {
    auto embedded = load_story_dir(embedded_dir);
    auto plain = load_story_dir(plain_dir);
    cc::analysis::BootstrapCI ci =
        cc::analysis::tok_stat_bootstrap(embedded, plain, 200, 1, min_stories);
    std::cout << "token-statistics distance: " << ci.point << "  (95% bootstrap CI ["
              << ci.low << ", " << ci.high << "], " << embedded.size() << " vs "
              << plain.size() << " stories)\n";
    return 0;
}

int run_analyze_indcc(const ModelOptions& model_opts, const SharedOptions& shared,
                      std::size_t trials, const std::string& adversary_name,
                      std::uint64_t seed) {
    auto model = model_opts.build();
    cc::analysis::GameConfig game;
    game.model = model.get();
    game.params = shared.params();
    game.embedder = shared.embedder();
    game.seed = seed != 0 ? seed : 7;

    cc::analysis::Adversary adversary;
    if (adversary_name == "random") {
        adversary = cc::analysis::random_guess_adversary();
    } else if (adversary_name == "prop1") {
        adversary = cc::analysis::prop1_adversary();
    } else if (adversary_name == "prop1-independent") {
        adversary = cc::analysis::independent_schedule_adversary(game.seed + 13);
    } else if (adversary_name == "freq") {
        adversary = cc::analysis::frequency_adversary();
    } else {
        throw cc::Error("unknown adversary '" + adversary_name + "'");
    }

    cc::analysis::GameResult result = cc::analysis::ind_cc_game(adversary, game, trials);
    std::cout << "adversary=" << adversary_name << " trials=" << result.trials
              << " correct=" << result.correct << " advantage=" << result.advantage
              << " (null sigma " << result.sigma << ")\n";
    return 0;
}

int run_gen(const ModelOptions& model_opts, const std::string& topic,
            std::size_t length, std::uint64_t seed) {
    auto model = model_opts.build();
    auto rng = make_rng(seed);
    std::cout << cc::sample_story(*model, topic, length, 0.7, 40, rng) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"covert ciphertext and key exchange over generated chat text"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    bool json_out = false;
    app.add_option("--seed", seed, "seed for non-protocol randomness (0 = random)");
    app.add_flag("--json", json_out, "machine-readable JSON output");

    // encrypt
    auto* encrypt = app.add_subcommand("encrypt", "password-encrypt a message into a story");
    ModelOptions enc_model;
    SharedOptions enc_shared;
    std::string enc_password_file, enc_topic = "catching up", enc_in;
    enc_model.attach(encrypt);
    enc_shared.attach(encrypt, true);
    encrypt->add_option("--password-file", enc_password_file,
                        "file holding the shared password (or env COVERT_PASSWORD)");
    encrypt->add_option("--topic", enc_topic, "topic the story talks about");
    encrypt->add_option("--in", enc_in, "plaintext file (default: stdin)");

    // decrypt
    auto* decrypt = app.add_subcommand("decrypt", "recover a message from a story");
    SharedOptions dec_shared;
    std::string dec_password_file, dec_in;
    dec_shared.attach(decrypt, true);
    decrypt->add_option("--password-file", dec_password_file,
                        "file holding the shared password (or env COVERT_PASSWORD)");
    decrypt->add_option("--in", dec_in, "story file (default: stdin)");

    // exchange
    auto* exchange = app.add_subcommand("exchange", "ephemeral key exchange over chat");
    ModelOptions ex_model, ex_peer_model;
    SharedOptions ex_shared;
    std::string ex_mode = "inproc", ex_curve = "curve25519", ex_topic = "catching up";
    std::string ex_rootkey_file, ex_host = "127.0.0.1";
    std::uint16_t ex_port = 47111;
    std::size_t ex_m = 0, ex_low = 0;
    bool ex_annotate = false, ex_toy = false;
    ex_model.attach(exchange);
    ex_shared.attach(exchange, false);
    exchange->add_option("--mode", ex_mode, "inproc, tcp-listen or tcp-connect")
        ->check(CLI::IsMember({"inproc", "tcp-listen", "tcp-connect"}));
    exchange->add_option("--curve", ex_curve, "curve25519 or secp112r1-toy");
    exchange->add_option("--topic", ex_topic, "chat topic");
    exchange->add_option("--rootkey-file", ex_rootkey_file,
                         "previous shared secret (or env COVERT_ROOTKEY)");
    exchange->add_option("--host", ex_host, "peer host for tcp-connect");
    exchange->add_option("--port", ex_port, "tcp port");
    exchange->add_option("--rounds", ex_m, "chat rounds per side (default 10; toy 3)");
    exchange->add_option("--low", ex_low, "minimum characters per round (default 3; toy 7)");
    exchange->add_flag("--annotate", ex_annotate,
                       "render the transcript with embedded characters highlighted");
    exchange->add_flag("--toy", ex_toy, "toy-curve worked-example profile");
    exchange->add_option("--corpus-b", ex_peer_model.corpus_file,
                         "separate corpus for the in-process peer");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "security analysis utilities");
    analyze->require_subcommand(1);
    auto* topf = analyze->add_subcommand("topf", "temperature-retry budget table");
    int topf_sec = 32, topf_level = 4;
    bool topf_grid = false;
    std::string topf_table;
    topf->add_option("--sec", topf_sec)->check(CLI::IsMember({16, 32, 48, 64, 96, 128}));
    topf->add_option("--level", topf_level)->check(CLI::Range(1, 4));
    topf->add_flag("--grid", topf_grid, "print the whole (sec, level) grid");
    topf->add_option("--freq-table", topf_table, "frequency table file");

    auto* tokstat = analyze->add_subcommand("tokstat", "token-statistics distance");
    std::string ts_embedded, ts_plain;
    std::size_t ts_min = 100;
    tokstat->add_option("--embedded", ts_embedded, "directory of embedded stories")
        ->required();
    tokstat->add_option("--plain", ts_plain, "directory of plain stories")->required();
    tokstat->add_option("--min-stories", ts_min, "minimum stories per corpus");

    auto* indcc = analyze->add_subcommand("indcc", "embedded-vs-plain distinguishing game");
    ModelOptions indcc_model;
    SharedOptions indcc_shared;
    std::size_t indcc_trials = 500;
    std::string indcc_adversary = "random";
    indcc_model.attach(indcc);
    indcc_shared.attach(indcc, true);
    indcc_shared.count = 1000; // many trials; the full count would only add latency
    indcc->add_option("--trials", indcc_trials);
    indcc->add_option("--adversary", indcc_adversary,
                      "random, prop1, prop1-independent or freq");

    // gen
    auto* gen = app.add_subcommand("gen", "plain story generation (for corpora and demos)");
    ModelOptions gen_model;
    std::string gen_topic = "catching up";
    std::size_t gen_length = 400;
    gen_model.attach(gen);
    gen->add_option("--topic", gen_topic);
    gen->add_option("--length", gen_length, "minimum story length in characters");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*encrypt) {
            return run_encrypt(enc_model, enc_shared, enc_password_file, enc_topic,
                               enc_in, seed, json_out);
        }
        if (*decrypt) {
            return run_decrypt(dec_shared, dec_password_file, dec_in);
        }
        if (*exchange) {
            return run_exchange(ex_model, ex_peer_model, ex_shared, ex_mode, ex_curve,
                                ex_topic, ex_rootkey_file, ex_host, ex_port, ex_m,
                                ex_low, seed, ex_annotate, ex_toy, json_out);
        }
        if (*topf) return run_analyze_topf(topf_sec, topf_level, topf_grid, topf_table);
        if (*tokstat) return run_analyze_tokstat(ts_embedded, ts_plain, ts_min);
        if (*indcc) {
            return run_analyze_indcc(indcc_model, indcc_shared, indcc_trials,
                                     indcc_adversary, seed);
        }
        if (*gen) return run_gen(gen_model, gen_topic, gen_length, seed);
    } catch (const cc::EmbeddingStuckError& e) {
        std::cerr << "embedding stuck: " << e.what() << "\n";
        return kExitEmbeddingStuck;
    } catch (const cc::ProtocolFailureError& e) {
        std::cerr << "protocol failure (round " << e.round() << "): " << e.what() << "\n";
        return kExitProtocolFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
