#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>

namespace semshift {

// Bundled English stopword list. Callers can replace it with a file-based
// list; an empty set is also valid.
inline const std::unordered_set<std::string>& default_stopwords() {
    static const std::unordered_set<std::string> kStopwords = {
        "about", "above", "after", "again", "against", "all", "am", "an", "and",
        "any", "are", "aren", "as", "at", "be", "because", "been", "before",
        "being", "below", "between", "both", "but", "by", "can", "cannot",
        "could", "couldn", "did", "didn", "do", "does", "doesn", "doing", "don",
        "down", "during", "each", "few", "for", "from", "further", "had",
        "hadn", "has", "hasn", "have", "haven", "having", "he", "her", "here",
        "hers", "herself", "him", "himself", "his", "how", "if", "in", "into",
        "is", "isn", "it", "its", "itself", "just", "like", "me", "more",
        "most", "mustn", "my", "myself", "no", "nor", "not", "now", "of",
        "off", "on", "once", "only", "or", "other", "ought", "our", "ours",
        "ourselves", "out", "over", "own", "re", "same", "shan", "she",
        "should", "shouldn", "so", "some", "such", "than", "that", "the",
        "their", "theirs", "them", "themselves", "then", "there", "these",
        "they", "this", "those", "through", "to", "too", "under", "until",
        "up", "ve", "very", "was", "wasn", "we", "were", "weren", "what",
        "when", "where", "which", "while", "who", "whom", "why", "will",
        "with", "won", "would", "wouldn", "you", "your", "yours", "yourself",
        "yourselves", "ll", "gt", "lt", "amp",
    };
    return kStopwords;
}

// Bundled surface -> lemma table: frequent irregular verbs and plurals.
// The table is range-clean (no value is itself a key), so applying it twice
// equals applying it once.
inline const std::unordered_map<std::string, std::string>& default_lemmas() {
    static const std::unordered_map<std::string, std::string> kLemmas = {
        {"began", "begin"},     {"begun", "begin"},     {"beginning", "begin"},
        {"broke", "break"},     {"broken", "break"},    {"brought", "bring"},
        {"built", "build"},     {"bought", "buy"},      {"came", "come"},
        {"comes", "come"},      {"caught", "catch"},    {"chose", "choose"},
        {"chosen", "choose"},   {"children", "child"},  {"dealt", "deal"},
        {"drew", "draw"},       {"drawn", "draw"},      {"drove", "drive"},
        {"driven", "drive"},    {"ate", "eat"},         {"eaten", "eat"},
        {"fell", "fall"},       {"fallen", "fall"},     {"felt", "feel"},
        {"feet", "foot"},       {"fought", "fight"},    {"found", "find"},
        {"flew", "fly"},        {"flown", "fly"},       {"forgot", "forget"},
        {"forgotten", "forget"},{"froze", "freeze"},    {"frozen", "freeze"},
        {"gave", "give"},       {"gives", "give"},      {"given", "give"},
        {"geese", "goose"},     {"goes", "go"},         {"went", "go"},
        {"gone", "go"},         {"going", "go"},        {"gets", "get"},
        {"got", "get"},         {"gotten", "get"},      {"getting", "get"},
        {"grew", "grow"},       {"grown", "grow"},      {"heard", "hear"},
        {"held", "hold"},       {"hid", "hide"},        {"hidden", "hide"},
        {"kept", "keep"},       {"knew", "know"},       {"known", "know"},
        {"knows", "know"},      {"knives", "knife"},    {"laid", "lay"},
        {"led", "lead"},        {"leaves", "leaf"},     {"left", "leave"},
        {"lent", "lend"},
        {"lost", "lose"},       {"lives", "life"},      {"made", "make"},
        {"makes", "make"},      {"making", "make"},     {"meant", "mean"},
        {"met", "meet"},        {"men", "man"},         {"mice", "mouse"},
        {"paid", "pay"},        {"ran", "run"},         {"runs", "run"},
        {"running", "run"},     {"rose", "rise"},       {"risen", "rise"},
        {"said", "say"},        {"says", "say"},        {"saying", "say"},
        {"saw", "see"},         {"seen", "see"},        {"sees", "see"},
        {"sold", "sell"},       {"sent", "send"},       {"shot", "shoot"},
        {"showed", "show"},     {"shown", "show"},      {"shows", "show"},
        {"sang", "sing"},       {"sung", "sing"},       {"sat", "sit"},
        {"slept", "sleep"},     {"spoke", "speak"},     {"spoken", "speak"},
        {"spent", "spend"},     {"stood", "stand"},     {"stole", "steal"},
        {"stolen", "steal"},    {"swam", "swim"},       {"swum", "swim"},
        {"took", "take"},       {"taken", "take"},      {"takes", "take"},
        {"taking", "take"},     {"taught", "teach"},    {"teeth", "tooth"},
        {"told", "tell"},       {"tells", "tell"},      {"thought", "think"},
        {"thinks", "think"},    {"threw", "throw"},     {"thrown", "throw"},
        {"understood", "understand"},                   {"wore", "wear"},
        {"worn", "wear"},       {"wives", "wife"},      {"woke", "wake"},
        {"woken", "wake"},      {"won", "win"},         {"wrote", "write"},
        {"written", "write"},   {"writes", "write"},    {"writing", "write"},
        {"bit", "bite"},        {"bitten", "bite"},     {"blew", "blow"},
        {"blown", "blow"},      {"bent", "bend"},       {"bound", "bind"},
        {"dug", "dig"},         {"hung", "hang"},       {"heroes", "hero"},
        {"echoes", "echo"},     {"oxen", "ox"},         {"crises", "crisis"},
        {"theses", "thesis"},   {"phenomena", "phenomenon"},
        {"criteria", "criterion"},                      {"media", "medium"},
        {"data", "datum"},      {"analyses", "analysis"},
    };
    return kLemmas;
}

}  // namespace semshift
