/** One stable color per uncertainty group, keyed by group name. Colors are
 * fixed so annotators build visual memory across sessions. */

export const GROUP_COLORS: Record<string, string> = {
  EXPLICIT_SU: "#e6194b",
  MODALITY: "#3cb44b",
  CONDITIONAL: "#ffe119",
  HYPOTHESIS: "#4363d8",
  PREDICTION: "#f58231",
  INTERROGATIVE: "#911eb4",
  NON_GENERALIZABLE: "#46f0f0",
  ADVERBIAL_SU: "#f032e6",
  NEGATION: "#bcf60c",
  SUBJECTIVITY: "#fabebe",
  CONJECTURAL: "#008080",
  DISAGREEMENT: "#e6beff",
};

export const REF_BADGES: Record<string, string> = {
  AUTHOR: "Author(s)",
  FORMER_STUDY: "Former study(s)",
  BOTH: "Author(s) & former study(s)",
  NONE: "",
};

export function groupColor(group: string): string {
  return GROUP_COLORS[group] ?? "#808080";
}
