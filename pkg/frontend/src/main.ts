import "./style.css";
import { boot } from "./app";

const root = document.getElementById("app");
if (root) {
  boot(root).catch((err) => {
    root.innerHTML = "";
    const box = document.createElement("p");
    box.className = "error-box";
    box.textContent = `dashboard failed to start: ${err instanceof Error ? err.message : String(err)}`;
    root.appendChild(box);
  });
}
