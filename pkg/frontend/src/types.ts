// Shapes mirrored from the service API. The UI renders these verbatim;
// it never derives query fields on its own.

export interface FieldState {
  value: string | null;
  status: string;
  reason: string;
}

export interface VariantFields {
  assembly_id: string | null;
  reference_name: string | null;
  start: number[];
  end: number[];
  reference_bases: string | null;
  alternate_bases: string | null;
  gene_id: string | null;
}

export interface FilterFields {
  filter_type: string;
  id: string | null;
  value: string | null;
  term: string;
  scope: string;
}

export interface Card {
  scope: FieldState;
  granularity: FieldState;
  variant: VariantFields | null;
  variant_status: FieldState;
  filters: FilterFields[];
  filters_status: FieldState;
  residue: string[];
  editable: boolean;
}

export interface QuestionResponse {
  kind: "card" | "refusal" | "greeting";
  state: string;
  card: Card | null;
  reply: string | null;
  reason: string | null;
}

export interface ConfirmBody {
  scope: string | null;
  granularity: string | null;
  variant: VariantFields | null;
  filters: FilterFields[];
}

export interface ColumnInfo {
  name: string;
  kind: string;
}

export interface ConfirmResponse {
  kind: "record" | "count" | "boolean";
  state: string;
  count: number | null;
  exists: boolean | null;
  row_count: number | null;
  columns: ColumnInfo[] | null;
  rows: unknown[][] | null;
  payload: Record<string, unknown>;
}

export interface GuardViolation {
  rule: string;
  line: number;
  excerpt: string;
}

export interface GuardInfo {
  verdict: "pass" | "reject";
  violations: GuardViolation[];
}

export interface ArtifactInfo {
  code: string;
  files: string[];
  assumptions: string[];
  feedback: string[];
}

export interface AnalysisResponse {
  state: string;
  artifact: ArtifactInfo;
  guard: GuardInfo;
}

export interface RunResponse {
  state: string;
  stdout: string;
  stderr: string;
  exit_status: number;
  files: string[];
  undeclared_files: string[];
  wall_time: number;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail: unknown;
}
