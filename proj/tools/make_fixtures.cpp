// Writes the bundled synthetic fixture: a tweet dump for six regions with
// the historical-scrape truncation applied, and a daily case file.
//
//   burden_fixtures OUT_DIR [--seed N]

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "burden/corpus.hpp"
#include "burden/dates.hpp"
#include "burden/rng.hpp"
#include "json.hpp"

namespace {

using burden::Date;
using burden::Rng;

const Date kStart = burden::parse_date("2020-03-01");
const Date kScrape = burden::parse_date("2020-05-15");
constexpr double kRetention = 0.35;
constexpr double kFillerPerDay = 25.0;
constexpr double kOffTopicPerDay = 8.0;
constexpr double kRetweetShare = 0.04;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double bump(double d, double at, double width) {
  const double z = (d - at) / width;
  return std::exp(-0.5 * z * z);
}

enum class Voice { english, indonesian, bangla };

struct Plan {
  std::string code;
  int offset_minutes;
  Voice voice;
  std::vector<std::string> cities;
  double case_scale;  // 0: region absent from the case file
  std::function<double(double)> intensity;
};

std::vector<Plan> plans() {
  return {
      {"DL", 330, Voice::english, {"Delhi", "Dwarka", "Rohini"}, 9.0,
       [](double d) {
         return 4.0 + 45.0 * logistic((d - 38.0) / 6.0) + 18.0 * bump(d, 47, 2);
       }},
      {"MH", 330, Voice::english, {"Mumbai", "Pune", "Thane"}, 14.0,
       [](double d) {
         return 6.0 + 55.0 * logistic((d - 32.0) / 7.0) +
                40.0 * bump(d, 60, 1.5) + 35.0 * bump(d, 67, 1.5);
       }},
      {"KL", 330, Voice::english, {"Kochi", "Kozhikode", "Thrissur"}, 3.0,
       [](double d) {
         return d < 41.0 ? 10.0 + 28.0 * bump(d, 22, 8) : 0.08;
       }},
      {"JK", 420, Voice::indonesian, {"Jakarta", "Depok", "Bekasi"}, 6.0,
       [](double d) { return 5.0 + 38.0 * logistic((d - 40.0) / 6.0); }},
      {"JB", 420, Voice::indonesian, {"Bandung", "Bogor", "Cimahi"}, 4.0,
       [](double d) {
         return 3.0 + 22.0 * logistic((d - 46.0) / 5.0) + 10.0 * bump(d, 55, 3);
       }},
      {"DH", 360, Voice::bangla, {"Dhaka", "Chittagong", "Sylhet"}, 0.0,
       [](double d) { return 3.0 + 26.0 * logistic((d - 47.0) / 5.0); }},
  };
}

template <std::size_t N>
const char* pick(Rng& rng, const char* const (&items)[N]) {
  return items[rng.below(N)];
}

const char* const kEnglishStrain[] = {
    "No beds available at the hospital, we were sent back twice",
    "ICU beds are full across the city",
    "Oxygen shortage at the government hospital again",
    "Medical college hospital has no ICU beds left",
    "Waited six hours outside the hospital for a bed",
    "Shortage of ventilators and ICU staff reported",
    "Hospitals overcrowded, patients on the floor",
    "Hospital turned away my father, no beds",
    "Beds shortage hitting private hospitals hard",
    "Need an ICU bed urgently, please RT",
};
const char* const kEnglishFiller[] = {
    "covid cases keep rising, stay home",
    "corona update for today",
    "so worried about my parents with this covid situation",
    "government must act faster on covid testing",
    "stay safe everyone #covid19",
    "wearing masks is not optional #corona",
    "covid relief fund details here",
};
const char* const kIndonesianStrain[] = {
    "Rumah sakit penuh, gak dapet tempat tidur",
    "RS udah overkapasitas, pasien antri di IGD",
    "Antri di UGD dari pagi belum dapat kasur",
    "Faskes kewalahan, ICU penuh bgt",
    "Kekurangan bed di rumah sakit rujukan",
    "IGD penuh, pasien dirujuk ke RS lain",
    "Tempat tidur ICU di rumah sakit sudah penuh",
    "Shortage APD di faskes, tenaga medical kelelahan",
};
const char* const kIndonesianFiller[] = {
    "covid makin parah, tetap di rumah ya",
    "corona bikin takut keluar rumah",
    "semoga covid cepat berlalu",
    "update kasus corona hari ini",
    "jaga jarak dan pakai masker #covid19",
};
const char* const kBanglaStrain[] = {
    "হাসপাতালে কোনো বেড নেই #covid19",
    "আইসিইউ সংকট চলছে #covid",
    "haspatal e bed nei, ICU full #covid",
    "Hospital beds shortage in the city, kendro te jayga nei",
    "ডাক্তার নেই, রোগী হাসপাতাল থেকে ফেরত #corona",
    "Medical kendro overcrowded, no ICU beds",
};
const char* const kBanglaFiller[] = {
    "করোনা পরিস্থিতি খারাপ হচ্ছে #covid19",
    "covid update from the city today",
    "stay home stay safe #corona",
    "corona testing kendro list shared below",
};
const char* const kOffTopic[] = {
    "watching the match tonight",
    "new phone launched today, looks great",
    "traffic is terrible this morning",
    "made biryani for lunch",
};
const char* const kHandles[] = {"@health_desk", "@citynews", "@helpline",
                                "@reporter_a"};

std::string compose(Rng& rng, const Plan& plan, bool strain) {
  std::string text;
  const char* base = nullptr;
  switch (plan.voice) {
    case Voice::english:
      base = strain ? pick(rng, kEnglishStrain) : pick(rng, kEnglishFiller);
      break;
    case Voice::indonesian:
      base = strain ? pick(rng, kIndonesianStrain)
                    : pick(rng, kIndonesianFiller);
      break;
    case Voice::bangla:
      base = strain ? pick(rng, kBanglaStrain) : pick(rng, kBanglaFiller);
      break;
  }
  text = base;
  if (rng.bernoulli(0.6)) {
    const auto n = std::to_string(2 + rng.below(60));
    switch (rng.below(4)) {
      case 0: text += strain ? ", ward " + n : ", day " + n; break;
      case 1: text += strain ? ", " + n + " waiting" : " (" + n + " new)"; break;
      case 2: text += " #" + std::string(strain ? "help" : "stayhome") + n; break;
      default: text += " since " + n + " hours"; break;
    }
  }
  const auto& city = plan.cities[rng.below(plan.cities.size())];
  if (rng.bernoulli(0.5)) text += " in " + city;
  if (strain && plan.voice != Voice::bangla && rng.bernoulli(0.7)) {
    text += rng.bernoulli(0.5) ? " #covid" : " #CoronaVirus";
  }
  if (rng.bernoulli(0.25)) text = std::string(pick(rng, kHandles)) + " " + text;
  if (rng.bernoulli(0.2)) {
    text += " https://news.example.org/a/" + std::to_string(rng.below(100000));
  }
  return text;
}

std::string lang_of(Voice v, const std::string& text) {
  if (v == Voice::indonesian) return "id";
  if (v == Voice::bangla) {
    for (unsigned char c : text) {
      if (c >= 0x80) return "bn";
    }
  }
  return "en";
}

struct Writer {
  burden::TweetCorpus corpus;
  std::uint64_t next_id = 1250000000000000000ULL;

  void add(Rng& rng, const Plan& plan, Date day, std::string text,
           std::string lang) {
    const auto local_second = std::chrono::seconds(rng.below(86400));
    burden::TweetRecord rec;
    rec.id = std::to_string(next_id++);
    rec.timestamp = burden::Timestamp{day} + local_second -
                    std::chrono::minutes(plan.offset_minutes);
    rec.region = plan.code;
    rec.text = std::move(text);
    rec.lang = std::move(lang);
    corpus.records.push_back(std::move(rec));
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the bundled synthetic fixture"};
  std::string out_dir;
  std::uint64_t seed = 2020;
  app.add_option("out", out_dir, "Output directory")->required();
  app.add_option("--seed", seed, "Generator seed");
  CLI11_PARSE(app, argc, argv);

  Rng rng(seed);
  Writer w;
  burden::RegionRegistry registry;
  std::vector<std::string> case_rows;
  const int days = burden::days_between(kStart, kScrape) + 1;

  for (const auto& plan : plans()) {
    registry.add({plan.code, plan.code, "", plan.offset_minutes});
    std::vector<double> lambda(static_cast<std::size_t>(days));
    for (int d = 0; d < days; ++d) lambda[d] = plan.intensity(d);
    for (int d = 0; d < days; ++d) {
      const Date day = burden::add_days(kStart, d);
      const auto strain = rng.poisson(lambda[d]);
      for (std::uint64_t i = 0; i < strain; ++i) {
        auto text = compose(rng, plan, true);
        if (rng.bernoulli(kRetweetShare)) {
          w.add(rng, plan, day, "RT " + std::string(pick(rng, kHandles)) +
                                    ": " + text,
                lang_of(plan.voice, text));
        }
        const auto lang = lang_of(plan.voice, text);
        w.add(rng, plan, day, std::move(text), lang);
      }
      const auto filler = rng.poisson(kFillerPerDay);
      for (std::uint64_t i = 0; i < filler; ++i) {
        auto text = compose(rng, plan, false);
        const auto lang = lang_of(plan.voice, text);
        w.add(rng, plan, day, std::move(text), lang);
      }
      const auto off = rng.poisson(kOffTopicPerDay);
      for (std::uint64_t i = 0; i < off; ++i) {
        w.add(rng, plan, day, pick(rng, kOffTopic), "en");
      }
      if (plan.code == "DL" && d % 9 == 0) {
        w.add(rng, plan, day, "कोविड अस्पताल #covid", "hi");
      }
    }
    if (plan.case_scale > 0.0) {
      // Cases follow a 5-day trailing mean of the underlying intensity.
      for (int d = 0; d < days; ++d) {
        double sum = 0.0;
        int n = 0;
        for (int j = std::max(0, d - 4); j <= d; ++j, ++n) sum += lambda[j];
        const double mean = plan.case_scale * sum / n;
        const double noisy = mean + 0.05 * mean * rng.normal();
        case_rows.push_back(plan.code + "," +
                            burden::format_date(burden::add_days(kStart, d)) +
                            "," + std::to_string(static_cast<long>(
                                      std::llround(std::max(0.0, noisy)))));
      }
    }
  }
  registry.add({"XX", "unregistered", "", 0});
  for (int i = 0; i < 4; ++i) {
    w.add(rng, plans().front(), burden::add_days(kStart, 10 * i),
          "covid hospital news", "en");
    w.corpus.records.back().region = "XX";
  }

  burden::sort_and_check(w.corpus);
  auto truncated = burden::simulate_truncation(w.corpus, kScrape, kRetention,
                                               seed + 1, registry);
  for (auto& rec : truncated.records) {
    if (rec.region == "XX") rec.region = "ZZ";
  }

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  burden::write_corpus(truncated, dir / "tweets.jsonl");
  {
    // A handful of damaged lines, well under the default tolerance.
    std::ofstream app_out(dir / "tweets.jsonl", std::ios::app);
    app_out << "{\"id\": \"broken\", \"created_at\": \"not a date\", "
               "\"region\": \"DL\", \"text\": \"covid\", \"lang\": \"en\"}\n";
    app_out << "{truncated json\n";
  }
  std::ofstream cases(dir / "cases.csv");
  cases << "region,date,new_cases\n";
  for (const auto& row : case_rows) cases << row << '\n';
  std::cout << "wrote " << truncated.size() << " tweets and "
            << case_rows.size() << " case rows to " << dir.string() << '\n';
  return 0;
}
