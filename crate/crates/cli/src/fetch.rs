//! Downloading and unpacking TU dataset archives.

use std::fs;
use std::io::{Cursor, Read};
use std::path::{Path, PathBuf};

use crate::CliError;

pub const DEFAULT_BASE_URL: &str = "https://www.chrsmrrs.com/graphkerneldatasets";

/// Files every TU dataset must provide.
pub const REQUIRED_SUFFIXES: [&str; 3] = ["A", "graph_indicator", "graph_labels"];

const MAX_ARCHIVE_BYTES: u64 = 512 * 1024 * 1024;

/// Downloads `<base>/<name>.zip` and unpacks it under `root`. A `file://`
/// base reads the archive from disk.
pub fn fetch_dataset(base_url: &str, name: &str, root: &Path) -> Result<PathBuf, CliError> {
    let url = format!("{}/{name}.zip", base_url.trim_end_matches('/'));
    let bytes = match url.strip_prefix("file://") {
        Some(path) => fs::read(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?,
        None => download(&url)?,
    };
    extract_archive(&bytes, name, root)
}

fn download(url: &str) -> Result<Vec<u8>, CliError> {
    log::info!("downloading {url}");
    let mut response = ureq::get(url).call().map_err(|e| CliError::Io(format!("{url}: {e}")))?;
    response
        .body_mut()
        .with_config()
        .limit(MAX_ARCHIVE_BYTES)
        .read_to_vec()
        .map_err(|e| CliError::Io(format!("{url}: {e}")))
}

/// Unpacks the `<name>/` entries of a zip archive into `root/<name>/` and
/// checks that the required files arrived.
pub fn extract_archive(bytes: &[u8], name: &str, root: &Path) -> Result<PathBuf, CliError> {
    let mut archive = zip::ZipArchive::new(Cursor::new(bytes)).map_err(|e| CliError::Io(format!("{name}.zip: {e}")))?;
    let dest = root.join(name);
    fs::create_dir_all(&dest).map_err(|e| CliError::Io(format!("{}: {e}", dest.display())))?;
    for i in 0..archive.len() {
        let mut entry = archive.by_index(i).map_err(|e| CliError::Io(format!("{name}.zip: {e}")))?;
        if entry.is_dir() {
            continue;
        }
        let Some(path) = entry.enclosed_name() else {
            log::warn!("skipping unsafe archive path {}", entry.name());
            continue;
        };
        // Archives nest files under `<name>/`; flat archives are accepted too.
        let Some(file_name) = path.file_name() else { continue };
        let parent_ok = path.parent().is_none_or(|p| p.as_os_str().is_empty() || p == Path::new(name));
        if !parent_ok {
            continue;
        }
        let mut data = Vec::with_capacity(entry.size() as usize);
        entry.read_to_end(&mut data).map_err(|e| CliError::Io(format!("{}: {e}", entry.name())))?;
        let target = dest.join(file_name);
        fs::write(&target, data).map_err(|e| CliError::Io(format!("{}: {e}", target.display())))?;
    }
    verify_dataset_dir(&dest, name)?;
    Ok(dest)
}

pub fn verify_dataset_dir(dir: &Path, name: &str) -> Result<(), CliError> {
    let missing: Vec<String> =
        REQUIRED_SUFFIXES.iter().map(|s| format!("{name}_{s}.txt")).filter(|f| !dir.join(f).is_file()).collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(CliError::Io(format!("{}: missing {}", dir.display(), missing.join(", "))))
    }
}
