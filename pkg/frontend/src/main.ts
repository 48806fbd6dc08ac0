// Bootstrap: a login form collects the service URL and bearer token (held
// in memory only), then the tabbed shell takes over.

import { ServiceClient } from "./api.js";
import { AppShell } from "./app.js";

function install(doc: Document): void {
  const host = doc.querySelector("#app");
  if (!host) {
    return;
  }
  const form = doc.createElement("form");
  form.className = "login";
  const url = doc.createElement("input");
  url.type = "text";
  url.value = "http://127.0.0.1:8080";
  url.name = "service-url";
  const token = doc.createElement("input");
  token.type = "password";
  token.placeholder = "bearer token";
  token.name = "token";
  const go = doc.createElement("button");
  go.type = "submit";
  go.textContent = "Connect";
  form.appendChild(url);
  form.appendChild(token);
  form.appendChild(go);
  form.onsubmit = (event) => {
    event.preventDefault();
    const client = new ServiceClient(url.value.replace(/\/$/, ""), token.value);
    const shell = new AppShell(doc, client);
    host.textContent = "";
    host.appendChild(shell.root);
    void shell.start();
  };
  host.appendChild(form);
}

install(document);
